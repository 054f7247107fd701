//! Simulated access-pattern leakage: sample i.i.d. queries, observe which
//! record sets come back, and watch empirical retrieval frequencies converge
//! to the exact limit values the attack matches against.
//!
//! Run with:
//!   cargo run --release --example leakage_simulation

use lama::*;
use num_rational::BigRational;
use std::collections::BTreeSet;

fn v(x: u32) -> Value {
    Value::new(vec![x])
}

fn main() -> Result<()> {
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
                QueryRect::new(v(lo), v(hi)).unwrap(),
                BigRational::from_integer(w.into()),
            )
        }),
    )?;
    let db = Database::new(
        domain,
        [("id_a".to_string(), v(3)), ("id_b".to_string(), v(4))],
    )?;

    let table = qd.cover_table(DEFAULT_QUERY_CAP)?;
    let a: BTreeSet<RecordId> = ["id_a".to_string()].into();
    let ab: BTreeSet<RecordId> = ["id_a".to_string(), "id_b".to_string()].into();
    let exact_a = table.retrieval_freq(&db, a.iter())?;
    let exact_ab = table.retrieval_freq(&db, ab.iter())?;
    println!("exact limit frequencies: f({{id_a}}) = {exact_a}, f({{id_a,id_b}}) = {exact_ab}\n");

    println!("samples    f({{id_a}})    f({{id_a,id_b}})");
    for m in [100usize, 1_000, 10_000, 100_000] {
        let trace = sample_leakage(&qd, &db, m, 42)?;
        println!(
            "{m:<10} {:<12.6} {:<12.6}",
            trace.empirical_freq(&a),
            trace.empirical_freq(&ab)
        );
    }
    println!(
        "\n(exact values: {:.6} and {:.6})",
        23.0 / 42.0,
        16.0 / 42.0
    );

    // a trace is enough to run the attack in empirical mode
    let trace = sample_leakage(&qd, &db, 100_000, 42)?;
    let source = FrequencySource::Empirical {
        trace: &trace,
        epsilon: BigRational::new(1.into(), 100.into()),
    };
    let report = run_attack(
        &qd,
        &source,
        SelectorKind::Full,
        2,
        &AttackConfig::default(),
    )?;
    println!("\nempirical attack on the 100k-sample trace:");
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
