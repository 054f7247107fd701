//! Constructive proof that size-`2k` matching tests are necessary.
//!
//! For any dimension `k` and `N >= 6` this module builds two databases and a
//! near-uniform query distribution such that, given the leakage of the first
//! database, the second passes every matching test of size up to `2k - 1` yet
//! fails the single size-`2k` test. Dropping the largest tests therefore
//! loses real reconstruction accuracy: the `2k` bound is tight.
//!
//! The construction places `2k` records in a diamond around the low corner of
//! the domain and mirrors them into a diamond around the high corner, then
//! perturbs a uniform weighting: the bounding rectangle of every odd-sized
//! record subset loses `delta` weight and every even-sized one gains it. The
//! alternating binomial sum cancels on every strict subset, leaving only the
//! full-set probability different between the two diamonds.

use crate::attack::{run_attack, AttackConfig, FrequencySource, SelectorKind};
use crate::domain::{mbq, query_universe, Database, DomainSpec, QueryRect, RecordId, Value};
use crate::error::{Error, Result};
use crate::prob::QueryDistribution;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A generated tightness instance: the true database, the decoy that slips
/// past the trimmed selector, and the perturbed-uniform distribution.
#[derive(Debug, Clone)]
pub struct TightnessInstance {
    pub db: Database,
    pub db_prime: Database,
    pub qd: QueryDistribution,
    /// Base weight assigned to every query before perturbation.
    pub alpha: BigInt,
    /// Perturbation applied per subset rectangle.
    pub delta: BigInt,
}

impl TightnessInstance {
    pub fn domain(&self) -> &DomainSpec {
        self.db.domain()
    }

    /// Values of the true database, in record order.
    pub fn low_values(&self) -> Vec<Value> {
        self.db.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Values of the decoy database, in record order.
    pub fn high_values(&self) -> Vec<Value> {
        self.db_prime.iter().map(|(_, v)| v.clone()).collect()
    }
}

fn diamond_value(domain: &DomainSpec, i: usize, low_side: bool) -> Value {
    // Records come in axis pairs: index 2j-1 steps one unit off the center on
    // axis j in one direction, index 2j in the other. The low diamond sits
    // around (2,...,2), the high one around (N-1,...,N-1); the two are full
    // reflections of each other with matching indices.
    let axis = i.div_ceil(2) - 1; // zero-based axis index
    let (center, odd_coord, even_coord) = if low_side {
        (2u32, 1u32, 3u32)
    } else {
        (domain.n - 1, domain.n, domain.n - 2)
    };
    let mut coords = vec![center; domain.k];
    coords[axis] = if i % 2 == 1 { odd_coord } else { even_coord };
    Value::new(coords)
}

/// Builds the instance for dimension `k` and domain size `N >= 6`.
///
/// Starting from weight `alpha` on every query, the bounding rectangle of
/// every `i`-sized subset of the true values is decreased by `delta` when `i`
/// is odd and increased when `i` is even (net adjustments accumulated per
/// rectangle). `delta` is 1 and `alpha` is one more than the largest
/// accumulated decrease, so every final weight stays positive and the
/// distribution expressive.
pub fn build_instance(k: usize, n: u32, cap: u128) -> Result<TightnessInstance> {
    if n < 6 || k < 1 {
        return Err(Error::InvalidDomain { n, k });
    }
    let domain = DomainSpec::new(n, k)?;

    let record_count = 2 * k;
    let ids: Vec<RecordId> = (1..=record_count).map(|i| format!("id{i:02}")).collect();
    let low: Vec<Value> = (1..=record_count)
        .map(|i| diamond_value(&domain, i, true))
        .collect();
    let high: Vec<Value> = (1..=record_count)
        .map(|i| diamond_value(&domain, i, false))
        .collect();

    let db = Database::new(domain, ids.iter().cloned().zip(low.iter().cloned()))?;
    let db_prime = Database::new(domain, ids.iter().cloned().zip(high.iter().cloned()))?;

    // net adjustment per rectangle over all nonempty subsets of the low values
    let mut net: BTreeMap<QueryRect, i64> = BTreeMap::new();
    for mask in 1u32..(1 << record_count) {
        let subset: Vec<&Value> = (0..record_count)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| &low[i])
            .collect();
        let rect = mbq(subset)?;
        let sign = if (mask.count_ones() % 2) == 1 { -1 } else { 1 };
        *net.entry(rect).or_insert(0) += sign;
    }
    let max_decrease = net.values().map(|&d| (-d).max(0)).max().unwrap_or(0);
    let alpha = BigInt::from(1 + max_decrease);
    let delta = BigInt::one();

    let weights: Vec<(QueryRect, BigRational)> = query_universe(&domain, cap)?
        .into_iter()
        .map(|q| {
            let adj = net.get(&q).copied().unwrap_or(0);
            let w = &alpha + BigInt::from(adj) * &delta;
            (q, BigRational::from_integer(w))
        })
        .collect();
    let qd = QueryDistribution::new(domain, weights)?;
    debug_assert!(qd.expressive_witness(cap)?.is_none());

    Ok(TightnessInstance {
        db,
        db_prime,
        qd,
        alpha,
        delta,
    })
}

/// Outcome of replaying an instance through the attack pipeline.
#[derive(Debug, Clone)]
pub struct VerificationRecord {
    /// The decoy is among the reconstructions of the trimmed selector.
    pub accepted_by_trimmed: bool,
    /// The decoy is absent from the reconstructions of the full selector.
    pub rejected_by_full: bool,
    /// Every strict nonempty subset has exactly equal cover probability on
    /// both sides.
    pub strict_subsets_match: bool,
    /// Cover probability gap on the full sets; positive by construction and
    /// equal to `delta / total_weight`.
    pub full_set_gap: BigRational,
    /// The alternating binomial sums behind the subset cancellation all
    /// vanish.
    pub cancellation_identity_holds: bool,
}

impl VerificationRecord {
    pub fn passes(&self) -> bool {
        self.accepted_by_trimmed
            && self.rejected_by_full
            && self.strict_subsets_match
            && self.full_set_gap > BigRational::zero()
            && self.cancellation_identity_holds
    }
}

/// Replays the instance: runs the attack on the true database's leakage with
/// both selectors and checks the decoy's membership, the strict-subset
/// probability equalities, the full-set gap, and the alternating-sum
/// identity.
pub fn verify_instance(
    inst: &TightnessInstance,
    config: &AttackConfig,
) -> Result<VerificationRecord> {
    let k = inst.domain().k;
    let record_count = 2 * k;
    let source = FrequencySource::Exact { db: &inst.db };

    let trimmed = run_attack(
        &inst.qd,
        &source,
        SelectorKind::Trimmed,
        record_count,
        config,
    )?;
    let full = run_attack(&inst.qd, &source, SelectorKind::Full, record_count, config)?;
    let accepted_by_trimmed = trimmed.final_set.contains_database(&inst.db_prime);
    let rejected_by_full = !full.final_set.contains_database(&inst.db_prime);

    let table = inst.qd.cover_table(config.query_cap)?;
    let low = inst.low_values();
    let high = inst.high_values();
    let mut strict_subsets_match = true;
    for mask in 1u32..((1 << record_count) - 1) {
        let picks: Vec<usize> = (0..record_count)
            .filter(|&i| mask & (1 << i) != 0)
            .collect();
        let p_low = table.cover_prob(picks.iter().map(|&i| &low[i]))?;
        let p_high = table.cover_prob(picks.iter().map(|&i| &high[i]))?;
        if p_low != p_high {
            strict_subsets_match = false;
            break;
        }
    }
    let full_set_gap = table.cover_prob(low.iter())? - table.cover_prob(high.iter())?;

    let mut cancellation_identity_holds = true;
    for m in 1..=record_count.saturating_sub(1) {
        let mut sum: i128 = 0;
        let mut binom: i128 = 1;
        for i in 0..=m {
            sum += if i % 2 == 0 { binom } else { -binom };
            binom = binom * (m as i128 - i as i128) / (i as i128 + 1);
        }
        if sum != 0 {
            cancellation_identity_holds = false;
        }
    }

    Ok(VerificationRecord {
        accepted_by_trimmed,
        rejected_by_full,
        strict_subsets_match,
        full_set_gap,
        cancellation_identity_holds,
    })
}
