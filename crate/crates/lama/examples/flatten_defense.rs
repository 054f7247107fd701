//! Defensive distribution rewriting: flatten single-value retrieval
//! probabilities, then whole equidistant-pair classes, and watch the attack's
//! reconstruction space blow up. Also demonstrates why the defense stops at
//! equidistant pairs: flattening across distance classes is impossible for
//! any expressive distribution.
//!
//! Run with:
//!   cargo run --release --example flatten_defense

use lama::*;
use std::collections::BTreeSet;

fn v(coords: &[u32]) -> Value {
    Value::new(coords.to_vec())
}

fn print_audit(label: &str, qd: &QueryDistribution) -> Result<()> {
    let report = audit_flatness(qd, DEFAULT_QUERY_CAP)?;
    println!("{label}");
    println!("  distance,pair_count,min_prob,max_prob,flat");
    for row in report.rows() {
        println!("  {row}");
    }
    println!("  all classes flat: {}\n", report.all_flat());
    Ok(())
}

fn main() -> Result<()> {
    let domain = DomainSpec::new(4, 2)?;
    let uniform = QueryDistribution::uniform(domain, DEFAULT_QUERY_CAP)?;
    print_audit("uniform distribution over [4]^2:", &uniform)?;

    let flat = flatten_equidistant(&uniform, DEFAULT_QUERY_CAP)?;
    print_audit("after equidistant-pair flattening:", &flat)?;

    // the defense in action: same database, both distributions
    let db = Database::new(
        domain,
        [("a".to_string(), v(&[1, 2])), ("b".to_string(), v(&[3, 3]))],
    )?;
    println!("attacking a 2-record database (values (1,2) and (3,3)):");
    for (label, qd) in [("uniform", &uniform), ("flattened", &flat)] {
        let source = FrequencySource::Exact { db: &db };
        let report = run_attack(qd, &source, SelectorKind::Full, 4, &AttackConfig::default())?;
        println!(
            "  under {label}: {} indistinguishable reconstructions",
            report.final_set.count
        );
    }
    println!("  (under the flattened distribution only the L1 distance leaks)\n");

    // why it stops at pairs: a witness with a different distance but a
    // strictly nested covering-query set always exists
    let a = v(&[2, 2]);
    let b = v(&[4, 3]);
    let (w, dir) = impossibility_witness(&flat, &a, &b, DEFAULT_QUERY_CAP)?;
    let table = flat.cover_table(DEFAULT_QUERY_CAP)?;
    println!("cross-distance flattening is impossible:");
    println!(
        "  pair ({a},{b}) at distance {}: Pr = {}",
        l1_dist(&a, &b)?,
        table.cover_prob([&a, &b])?
    );
    println!(
        "  witness pair ({a},{w}) at distance {}: Pr = {} ({:?})",
        l1_dist(&a, &w)?,
        table.cover_prob([&a, &w])?,
        dir
    );

    // singleton-only flattening already kills anchor selection: every record
    // matches every value at size 1
    let singles_flat = flatten_singletons(&uniform, DEFAULT_QUERY_CAP)?;
    let table = singles_flat.cover_table(DEFAULT_QUERY_CAP)?;
    let source = FrequencySource::Exact { db: &db };
    let ids: BTreeSet<RecordId> = db.ids().cloned().collect();
    let fresh = CandidateTable::new(&ids, &domain);
    let left = LeftExpr::new(["a".to_string()])?;
    let matches = find_matches(&table, &source, &left, &fresh, true)?;
    println!(
        "\nafter singleton flattening, record `a` matches {} of {} domain values",
        matches.len(),
        domain.value_count()
    );
    Ok(())
}
