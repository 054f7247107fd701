//! The classic one-dimensional anchor-point attack: under uniform queries,
//! the record with the lowest retrieval frequency sits at an extreme of the
//! domain; pairing every other record with that anchor breaks the
//! value-or-reflection tie with linearly many tests instead of quadratically
//! many.
//!
//! Run with:
//!   cargo run --release --example anchored_attack

use lama::*;
use std::collections::BTreeSet;

fn v(x: u32) -> Value {
    Value::new(vec![x])
}

fn main() -> Result<()> {
    let domain = DomainSpec::new(20, 1)?;
    let qd = QueryDistribution::uniform(domain, DEFAULT_QUERY_CAP)?;
    let db = Database::new(
        domain,
        [
            ("r1".to_string(), v(3)),
            ("r2".to_string(), v(7)),
            ("r3".to_string(), v(8)),
            ("r4".to_string(), v(15)),
            ("r5".to_string(), v(19)),
        ],
    )?;

    let table = qd.cover_table(DEFAULT_QUERY_CAP)?;
    println!("singleton retrieval frequencies under uniform queries:");
    for (id, val) in db.iter() {
        let ids = [id.clone()];
        println!(
            "  {id} (value {val}): {}",
            table.retrieval_freq(&db, ids.iter())?
        );
    }
    println!("lowest frequency = most extreme value; that record anchors the pair tests\n");

    let source = FrequencySource::Exact { db: &db };
    let anchored = run_attack(
        &qd,
        &source,
        SelectorKind::Anchored,
        2,
        &AttackConfig::default(),
    )?;
    println!(
        "anchored attack ({} records, {} pair tests):",
        db.len(),
        db.len() - 1
    );
    for r in &anchored.rounds {
        println!(
            "  t={} matches={} reconstructions={}",
            r.t, r.matches, r.reconstructions
        );
    }

    let full = run_attack(
        &qd,
        &source,
        SelectorKind::Full,
        2,
        &AttackConfig::default(),
    )?;
    let mut a = anchored.final_set.solutions.clone();
    let mut b = full.final_set.solutions.clone();
    a.sort();
    b.sort();
    println!(
        "\nanchored final set equals full final set: {} ({} reconstructions)",
        a == b,
        anchored.final_set.count
    );

    let axes: BTreeSet<usize> = [0].into();
    println!(
        "final set is the database and its mirror image: {}",
        anchored.final_set.contains_database(&db)
            && anchored.final_set.contains_database(&db.reflect(&axes))
    );
    Ok(())
}
