//! The full selector reaches the information-theoretic limit: its output
//! equals the brute-force enumeration of all databases with the same
//! response distribution as the true one.
//!
//! Run with:
//!   cargo run --release --example attack_vs_oracle [seed]

use lama::*;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn main() -> Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(17);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let domain = DomainSpec::new(4, 2)?;
    let values: Vec<Value> = domain.values().collect();
    let mut picked = BTreeSet::new();
    while picked.len() < 3 {
        picked.insert(rng.gen_range(0..values.len()));
    }
    let db = Database::new(
        domain,
        picked
            .iter()
            .enumerate()
            .map(|(i, &vi)| (format!("r{i}"), values[vi].clone())),
    )?;
    println!("domain {domain}, seed {seed}");
    for (id, val) in db.iter() {
        println!("  {id} holds {val}");
    }

    // a generic weighted distribution (every query weighted 1..=10)
    let weights: Vec<_> = query_universe(&domain, DEFAULT_QUERY_CAP)?
        .into_iter()
        .map(|q| {
            let w: i64 = rng.gen_range(1..=10);
            (q, BigRational::from_integer(w.into()))
        })
        .collect();
    let qd = QueryDistribution::new(domain, weights)?;

    let source = FrequencySource::Exact { db: &db };
    let report = run_attack(
        &qd,
        &source,
        SelectorKind::Full,
        2 * domain.k,
        &AttackConfig::default(),
    )?;
    println!("\nattack rounds:");
    for r in &report.rounds {
        println!(
            "  t={} matches={} reconstructions={}",
            r.t, r.matches, r.reconstructions
        );
    }

    let oracle = ird_enumerate(&qd, &db, DEFAULT_ORACLE_CAP)?;
    println!("oracle class size: {}", oracle.len());

    let mut got: Vec<Vec<Value>> = report
        .final_set
        .databases(domain)?
        .iter()
        .map(|d| d.iter().map(|(_, v)| v.clone()).collect())
        .collect();
    let mut want: Vec<Vec<Value>> = oracle
        .iter()
        .map(|d| d.iter().map(|(_, v)| v.clone()).collect())
        .collect();
    got.sort();
    want.sort();
    assert_eq!(got, want, "attack output must equal the oracle class");
    println!("attack output equals the oracle class: true");
    Ok(())
}
