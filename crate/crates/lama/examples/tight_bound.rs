//! Why matching tests must go all the way to size 2k: a generated instance
//! where a decoy database passes every smaller test and only the one
//! full-size test tells it apart from the truth.
//!
//! Run with:
//!   cargo run --release --example tight_bound [k] [N]

use lama::*;

fn main() -> Result<()> {
    let k: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let n: u32 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);

    let inst = build_instance(k, n, DEFAULT_QUERY_CAP)?;
    println!(
        "instance over [{n}]^{k}: alpha={} delta={}",
        inst.alpha, inst.delta
    );
    println!("true database (low diamond):");
    for (id, val) in inst.db.iter() {
        println!("  {id} -> {val}");
    }
    println!("decoy database (high diamond, the full reflection):");
    for (id, val) in inst.db_prime.iter() {
        println!("  {id} -> {val}");
    }

    // every strict subset of records is retrieved with identical probability
    // in both databases; only all 2k together differ
    let table = inst.qd.cover_table(DEFAULT_QUERY_CAP)?;
    let low = inst.low_values();
    let high = inst.high_values();
    println!("\ncover probabilities (true side vs decoy side):");
    for size in 1..=2 * k {
        let picks: Vec<usize> = (0..size).collect();
        let p_low = table.cover_prob(picks.iter().map(|&i| &low[i]))?;
        let p_high = table.cover_prob(picks.iter().map(|&i| &high[i]))?;
        println!(
            "  first {size} records: {p_low} vs {p_high} ({})",
            if p_low == p_high {
                "equal"
            } else {
                "DIFFERENT"
            }
        );
    }

    let record = verify_instance(&inst, &AttackConfig::default())?;
    println!("\nreplaying through the attack pipeline:");
    println!(
        "  decoy accepted by the trimmed selector (sizes 1..{}): {}",
        2 * k - 1,
        record.accepted_by_trimmed
    );
    println!(
        "  decoy rejected by the full selector (sizes 1..{}):    {}",
        2 * k,
        record.rejected_by_full
    );
    println!(
        "  strict subsets exactly equal: {}",
        record.strict_subsets_match
    );
    println!("  full-set probability gap: {}", record.full_set_gap);
    assert!(record.passes());
    println!("\nthe size-2k tests are necessary: dropping them admits the decoy");
    Ok(())
}
