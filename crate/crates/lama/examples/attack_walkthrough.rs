//! Step-by-step reconstruction of a two-record database from its retrieval
//! frequencies: selector picks the record events, translator matches them to
//! value tuples and builds the constraint formula, solver enumerates the
//! satisfying assignments.
//!
//! Run with:
//!   cargo run --release --example attack_walkthrough

use lama::*;
use num_rational::BigRational;
use std::collections::BTreeSet;

fn v(coords: &[u32]) -> Value {
    Value::new(coords.to_vec())
}

fn main() -> Result<()> {
    // Domain [5], two records: id_a holds 3, id_b holds 4. The client's
    // query distribution is known to the attacker (weights over 42).
    let domain = DomainSpec::new(5, 1)?;
    let weights = [
        (1u32, 1u32, 5i64),
        (1, 2, 2),
        (1, 3, 3),
        (1, 4, 2),
        (1, 5, 7),
        (2, 2, 4),
        (2, 3, 2),
        (2, 4, 1),
        (2, 5, 2),
        (3, 3, 2),
        (3, 4, 1),
        (3, 5, 3),
        (4, 4, 1),
        (4, 5, 2),
        (5, 5, 5),
    ];
    let qd = QueryDistribution::new(
        domain,
        weights.map(|(lo, hi, w)| {
            (
                QueryRect::new(v(&[lo]), v(&[hi])).unwrap(),
                BigRational::from_integer(w.into()),
            )
        }),
    )?;
    let db = Database::new(
        domain,
        [("id_a".to_string(), v(&[3])), ("id_b".to_string(), v(&[4]))],
    )?;

    println!("domain {domain}, total query weight {}", qd.total_weight());
    let table = qd.cover_table(DEFAULT_QUERY_CAP)?;
    let source = FrequencySource::Exact { db: &db };

    // The attacker observes (in the limit) how often each record set is
    // retrieved together.
    for ids in [vec!["id_a"], vec!["id_b"], vec!["id_a", "id_b"]] {
        let owned: Vec<RecordId> = ids.iter().map(|s| s.to_string()).collect();
        let f = table.retrieval_freq(&db, owned.iter())?;
        println!("observed frequency of {{{}}}: {f}", ids.join(","));
    }

    // Translator: find every value tuple whose cover probability matches.
    let ids: BTreeSet<RecordId> = ["id_a".to_string(), "id_b".to_string()].into();
    let fresh = CandidateTable::new(&ids, &domain);
    let single = LeftExpr::new(["id_a".to_string()])?;
    let singles = find_matches(&table, &source, &single, &fresh, false)?;
    println!(
        "\nmatches for {{id_a}}: {:?}",
        singles
            .iter()
            .map(|m| m.right[0].to_string())
            .collect::<Vec<_>>()
    );
    let pair = LeftExpr::new(["id_a".to_string(), "id_b".to_string()])?;
    let pairs = find_matches(&table, &source, &pair, &fresh, false)?;
    println!(
        "matches for {{id_a,id_b}}: {:?}",
        pairs
            .iter()
            .map(|m| format!("({},{})", m.right[0], m.right[1]))
            .collect::<Vec<_>>()
    );

    // One formula constrains all assignments simultaneously.
    let formula = build_formula(&[(single, singles), (pair, pairs)]);
    println!("\nformula: {formula}");

    // Solver: all injective assignments satisfying the formula.
    let solutions = solve_all(&formula, &domain, &ids, 100, 1_000_000)?;
    println!("satisfying assignments: {}", solutions.count);
    for sol in &solutions.solutions {
        let rendered: Vec<String> = solutions
            .ids
            .iter()
            .zip(sol)
            .map(|(id, val)| format!("{id}={val}"))
            .collect();
        println!("  {}", rendered.join(" "));
    }

    // The full pipeline wraps those stages per round t = 1, 2.
    let report = run_attack(
        &qd,
        &source,
        SelectorKind::Full,
        2,
        &AttackConfig::default(),
    )?;
    println!("\nfull pipeline rounds (t, matches, reconstructions):");
    for r in &report.rounds {
        println!(
            "  t={} matches={} reconstructions={}",
            r.t, r.matches, r.reconstructions
        );
    }
    println!(
        "recovered the true database: {}",
        report.final_set.contains_database(&db)
    );
    Ok(())
}
