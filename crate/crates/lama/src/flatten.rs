//! Defensive rewriting of query distributions.
//!
//! [`flatten_singletons`] raises point-query weights until every value is
//! retrieved with the same probability, so size-1 frequency matching learns
//! nothing. [`flatten_equidistant`] extends this to pairs: iterating from the
//! largest L1 distance down to 0, it raises the weight of each rectangle
//! until, within every distance class, all value pairs share one retrieval
//! probability. An attacker then learns at most the pairwise distances.
//!
//! Cross-distance flattening is impossible for expressive distributions:
//! [`impossibility_witness`] produces, for any value pair, a second pair at a
//! different distance whose covering-query set strictly nests with the
//! first's, forcing strictly different probabilities.

use crate::domain::{query_universe, DomainSpec, QueryRect, Value};
use crate::error::{Error, Result};
use crate::prob::QueryDistribution;
use num_rational::BigRational;
use num_traits::Zero;

/// Census of pair-retrieval probabilities by L1 distance class.
///
/// Classes partition all unordered value pairs; distance 0 is a value paired
/// with itself, so the d=0 class reports singleton flatness.
#[derive(Debug, Clone)]
pub struct FlatnessReport {
    pub classes: Vec<FlatnessClass>,
}

#[derive(Debug, Clone)]
pub struct FlatnessClass {
    pub distance: u32,
    /// Number of unordered pairs at this distance.
    pub pair_count: u128,
    /// Distinct probabilities observed in the class, ascending. A flat class
    /// has exactly one.
    pub probabilities: Vec<BigRational>,
}

impl FlatnessClass {
    pub fn is_flat(&self) -> bool {
        self.probabilities.len() == 1
    }

    pub fn common_prob(&self) -> Option<&BigRational> {
        if self.is_flat() {
            self.probabilities.first()
        } else {
            None
        }
    }

    pub fn min_prob(&self) -> &BigRational {
        self.probabilities.first().expect("class is never empty")
    }

    pub fn max_prob(&self) -> &BigRational {
        self.probabilities.last().expect("class is never empty")
    }
}

impl FlatnessReport {
    pub fn all_flat(&self) -> bool {
        self.classes.iter().all(FlatnessClass::is_flat)
    }

    pub fn singletons_flat(&self) -> bool {
        self.classes
            .first()
            .map(FlatnessClass::is_flat)
            .unwrap_or(false)
    }

    pub fn class(&self, distance: u32) -> Option<&FlatnessClass> {
        self.classes.iter().find(|c| c.distance == distance)
    }

    /// Machine-readable rows: `distance,pair_count,min_prob,max_prob,flat`.
    pub fn rows(&self) -> Vec<String> {
        self.classes
            .iter()
            .map(|c| {
                format!(
                    "{},{},{},{},{}",
                    c.distance,
                    c.pair_count,
                    c.min_prob(),
                    c.max_prob(),
                    c.is_flat()
                )
            })
            .collect()
    }
}

/// Raises point-query weights so every value has the same retrieval
/// probability. Only weights of queries `[v,v]` change, each by exactly
/// `s_mx - s_v` where `s_v` is the weight-sum covering `v` and `s_mx` its
/// maximum over the domain. The input is never modified.
pub fn flatten_singletons(qd: &QueryDistribution, cap: u128) -> Result<QueryDistribution> {
    let domain = *qd.domain();
    let table = qd.cover_table(cap)?;
    let mut s_mx = BigRational::zero();
    for v in domain.values() {
        let s = table.rect_cover_weight(&QueryRect::point(v));
        if s > s_mx {
            s_mx = s;
        }
    }
    let mut out = qd.clone();
    for v in domain.values() {
        let s = table.rect_cover_weight(&QueryRect::point(v.clone()));
        let inc = &s_mx - &s;
        if !inc.is_zero() {
            out.add_weight(QueryRect::point(v), &inc)?;
        }
    }
    Ok(out)
}

/// Flattens the retrieval probability of every equidistant pair of values.
///
/// Works on distance classes from `k(N-1)` down to 0. A pair's cover sum is
/// its minimum bounding rectangle's cover sum, and every rectangle of corner
/// distance `d` is the bounding rectangle of some distance-`d` pair, so each
/// iteration raises every size-`d` rectangle's cover sum to the class maximum
/// by bumping that rectangle's own weight. Size-`d` updates never touch pairs
/// at distance greater than `d`, so earlier classes stay flat. The final
/// `d = 0` round subsumes singleton flattening.
///
/// Requires an expressive input (every query weighted); the first zero-weight
/// query is reported otherwise. The input is never modified.
pub fn flatten_equidistant(qd: &QueryDistribution, cap: u128) -> Result<QueryDistribution> {
    qd.require_expressive(cap)?;
    let domain = *qd.domain();
    let universe = query_universe(&domain, cap)?;
    let max_d = domain.max_distance();
    let mut by_size: Vec<Vec<&QueryRect>> = vec![Vec::new(); max_d as usize + 1];
    for q in &universe {
        by_size[q.size() as usize].push(q);
    }
    let mut out = qd.clone();
    for d in (0..=max_d).rev() {
        let rects = &by_size[d as usize];
        if rects.is_empty() {
            continue;
        }
        let table = out.cover_table(cap)?;
        let mut s_mx = BigRational::zero();
        for r in rects {
            let s = table.rect_cover_weight(r);
            if s > s_mx {
                s_mx = s;
            }
        }
        for r in rects {
            let s = table.rect_cover_weight(r);
            let inc = &s_mx - &s;
            if !inc.is_zero() {
                out.add_weight((*r).clone(), &inc)?;
            }
        }
    }
    Ok(out)
}

/// Exact per-class probability census over all unordered pairs (and
/// singletons as distance 0).
pub fn audit_flatness(qd: &QueryDistribution, cap: u128) -> Result<FlatnessReport> {
    let domain = *qd.domain();
    let table = qd.cover_table(cap)?;
    let universe = query_universe(&domain, cap)?;
    let max_d = domain.max_distance();
    let mut probs: Vec<Vec<BigRational>> = vec![Vec::new(); max_d as usize + 1];
    let mut counts: Vec<u128> = vec![0; max_d as usize + 1];
    for q in &universe {
        let d = q.size() as usize;
        probs[d].push(table.rect_cover_prob(q));
        // Pairs whose bounding rectangle is exactly q sit at antipodal
        // corners: 2^(m-1) unordered pairs for m non-degenerate axes, one
        // degenerate self-pair for points.
        let m = q
            .low()
            .coords()
            .iter()
            .zip(q.high().coords())
            .filter(|(l, h)| l != h)
            .count();
        counts[d] += if m == 0 { 1 } else { 1u128 << (m - 1) };
    }
    let mut classes = Vec::with_capacity(max_d as usize + 1);
    for d in 0..=max_d {
        let mut ps = std::mem::take(&mut probs[d as usize]);
        ps.sort();
        ps.dedup();
        classes.push(FlatnessClass {
            distance: d,
            pair_count: counts[d as usize],
            probabilities: ps,
        });
    }
    Ok(FlatnessReport { classes })
}

/// Which pair's covering-query set strictly contains the other's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessDirection {
    /// Queries covering `(v, v'')` strictly contain those covering
    /// `(v, v')`: the witness pair is strictly more probable.
    WitnessMoreProbable,
    /// Queries covering `(v, v'')` are strictly contained in those covering
    /// `(v, v')`: the witness pair is strictly less probable.
    WitnessLessProbable,
}

/// Produces a value `v''` at a different L1 distance from `v` than `v'` is,
/// with `Pr[both v,v'' retrieved] != Pr[both v,v' retrieved]` guaranteed for
/// any expressive distribution. `v''` equals `v'` except on one dimension.
///
/// The bounding rectangles of the two pairs nest strictly, so one pair's
/// covering queries form a strict subset of the other's; with every query
/// weighted, the probabilities differ strictly. No expressive distribution
/// can therefore equalize pair probabilities across distance classes.
pub fn impossibility_witness(
    qd: &QueryDistribution,
    v: &Value,
    v_prime: &Value,
    cap: u128,
) -> Result<(Value, WitnessDirection)> {
    let domain = *qd.domain();
    if domain.n <= 2 {
        return Err(Error::InvalidDomain {
            n: domain.n,
            k: domain.k,
        });
    }
    if v == v_prime {
        return Err(Error::IdenticalValues);
    }
    if !domain.contains(v) || !domain.contains(v_prime) {
        return Err(Error::OutOfDomain {
            coord: 0,
            n: domain.n,
            dim: domain.k,
        });
    }
    qd.require_expressive(cap)?;

    let vc = v.coords();
    let pc = v_prime.coords();

    // A dimension where the pair is at least 2 apart: step off v toward v',
    // shrinking the bounding rectangle strictly.
    if let Some(j) = (0..domain.k).find(|&j| vc[j].abs_diff(pc[j]) >= 2) {
        let mut coords = pc.to_vec();
        coords[j] = if pc[j] > vc[j] { vc[j] + 1 } else { vc[j] - 1 };
        return Ok((Value::new(coords), WitnessDirection::WitnessMoreProbable));
    }
    // A dimension where the pair agrees: step off v, growing the rectangle.
    if let Some(j) = (0..domain.k).find(|&j| vc[j] == pc[j]) {
        let mut coords = pc.to_vec();
        coords[j] = if vc[j] < domain.n {
            vc[j] + 1
        } else {
            vc[j] - 1
        };
        return Ok((Value::new(coords), WitnessDirection::WitnessLessProbable));
    }
    // Every dimension differs by exactly 1: collapse the first one, shrinking
    // the rectangle strictly. (In one dimension this degenerates to the
    // self-pair (v, v), a distance-0 pair.)
    let mut coords = pc.to_vec();
    coords[0] = vc[0];
    Ok((Value::new(coords), WitnessDirection::WitnessMoreProbable))
}

/// Distance classes with their pair counts for a domain, mostly useful for
/// sanity checks: classes partition all unordered pairs.
pub fn pair_class_sizes(domain: &DomainSpec, cap: u128) -> Result<Vec<u128>> {
    let report_domain_pairs = {
        let total_values = domain.value_count();
        total_values * (total_values - 1) / 2 + total_values
    };
    let universe = query_universe(domain, cap)?;
    let mut counts: Vec<u128> = vec![0; domain.max_distance() as usize + 1];
    for q in &universe {
        let m = q
            .low()
            .coords()
            .iter()
            .zip(q.high().coords())
            .filter(|(l, h)| l != h)
            .count();
        counts[q.size() as usize] += if m == 0 { 1 } else { 1u128 << (m - 1) };
    }
    debug_assert_eq!(counts.iter().sum::<u128>(), report_domain_pairs);
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{l1_dist, DEFAULT_QUERY_CAP};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(coords: &[u32]) -> Value {
        Value::new(coords.to_vec())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn singleton_flattening_uniform_1d() {
        let d = DomainSpec::new(3, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_singletons(&qd, DEFAULT_QUERY_CAP).unwrap();
        // weight 1 added to [1,1] and [3,3]; totals go 6 -> 8
        assert_eq!(flat.weight(&QueryRect::point(v(&[1]))), rat(2, 1));
        assert_eq!(flat.weight(&QueryRect::point(v(&[3]))), rat(2, 1));
        assert_eq!(flat.weight(&QueryRect::point(v(&[2]))), rat(1, 1));
        assert_eq!(flat.total_weight(), rat(8, 1));
        let table = flat.cover_table(DEFAULT_QUERY_CAP).unwrap();
        for val in d.values() {
            assert_eq!(table.cover_prob([&val]).unwrap(), rat(4, 8));
        }
        // only point queries changed
        for (q, w) in qd.iter() {
            if q.low() != q.high() {
                assert_eq!(&flat.weight(q), w, "non-point query {q} changed");
            }
        }
    }

    #[test]
    fn singleton_flattening_fixed_points() {
        // already-flat input comes back unchanged
        let d = DomainSpec::new(3, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_singletons(&qd, DEFAULT_QUERY_CAP).unwrap();
        let again = flatten_singletons(&flat, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(flat, again);
        // single-value domain is trivially flat
        let tiny = DomainSpec::new(1, 1).unwrap();
        let qd = QueryDistribution::uniform(tiny, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_singletons(&qd, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(flat, qd);
    }

    #[test]
    fn equidistant_flattening_4x4() {
        let d = DomainSpec::new(4, 2).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let before = audit_flatness(&qd, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(before.classes.len(), 7);
        assert!(
            !before.class(1).unwrap().is_flat(),
            "uniform [4]^2 should not be pair-flat at d=1"
        );
        let flat = flatten_equidistant(&qd, DEFAULT_QUERY_CAP).unwrap();
        let after = audit_flatness(&flat, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(after.classes.len(), 7);
        assert!(after.all_flat(), "rows: {:?}", after.rows());
        // idempotent
        let twice = flatten_equidistant(&flat, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(flat, twice);
    }

    #[test]
    fn equidistant_flattening_5_1d() {
        let d = DomainSpec::new(5, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_equidistant(&qd, DEFAULT_QUERY_CAP).unwrap();
        let report = audit_flatness(&flat, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(report.classes.len(), 5);
        assert!(report.all_flat());
    }

    #[test]
    fn equidistant_rejects_non_expressive() {
        let d = DomainSpec::new(3, 1).unwrap();
        let mut qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let q = QueryRect::new(v(&[1]), v(&[2])).unwrap();
        qd.set_weight(q.clone(), BigRational::zero()).unwrap();
        match flatten_equidistant(&qd, DEFAULT_QUERY_CAP) {
            Err(Error::NonExpressive { witness }) => assert_eq!(witness, q),
            other => panic!("expected NonExpressive, got {other:?}"),
        }
    }

    #[test]
    fn flattening_only_touches_rects_of_current_distance_or_less() {
        // after the pass, every class is flat AND class probabilities
        // strictly decrease with distance (expressive input)
        let d = DomainSpec::new(4, 2).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_equidistant(&qd, DEFAULT_QUERY_CAP).unwrap();
        let report = audit_flatness(&flat, DEFAULT_QUERY_CAP).unwrap();
        for w in report.classes.windows(2) {
            assert!(w[0].common_prob().unwrap() > w[1].common_prob().unwrap());
        }
    }

    #[test]
    fn n1_domain_single_flat_class() {
        let d = DomainSpec::new(1, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let report = audit_flatness(&qd, DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(report.classes.len(), 1);
        assert!(report.all_flat());
    }

    #[test]
    fn class_sizes_partition_pairs() {
        for (n, k) in [(4u32, 2usize), (5, 1), (3, 3)] {
            let d = DomainSpec::new(n, k).unwrap();
            let sizes = pair_class_sizes(&d, DEFAULT_QUERY_CAP).unwrap();
            let vals: Vec<Value> = d.values().collect();
            let mut brute = vec![0u128; d.max_distance() as usize + 1];
            for (i, a) in vals.iter().enumerate() {
                for b in &vals[i..] {
                    brute[l1_dist(a, b).unwrap() as usize] += 1;
                }
            }
            assert_eq!(sizes, brute, "N={n} k={k}");
        }
    }

    #[test]
    fn flattened_class_contains_all_distance_preserving_databases() {
        // three records on [4]: every placement preserving all pairwise
        // distances is indistinguishable under the flattened distribution
        let d = DomainSpec::new(4, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_equidistant(&qd, DEFAULT_QUERY_CAP).unwrap();
        let db = crate::domain::Database::new(
            d,
            [
                ("a".to_string(), v(&[1])),
                ("b".to_string(), v(&[2])),
                ("c".to_string(), v(&[4])),
            ],
        )
        .unwrap();
        let ird = crate::prob::ird_enumerate(&flat, &db, 1_000_000).unwrap();
        let ids: Vec<&str> = vec!["a", "b", "c"];
        let dist = |x: &crate::domain::Database, i: usize, j: usize| {
            l1_dist(x.get(ids[i]).unwrap(), x.get(ids[j]).unwrap()).unwrap()
        };
        let vals: Vec<Value> = d.values().collect();
        for va in &vals {
            for vb in &vals {
                for vc in &vals {
                    if va == vb || va == vc || vb == vc {
                        continue;
                    }
                    let cand = crate::domain::Database::new(
                        d,
                        [
                            ("a".to_string(), va.clone()),
                            ("b".to_string(), vb.clone()),
                            ("c".to_string(), vc.clone()),
                        ],
                    )
                    .unwrap();
                    let preserves =
                        (0..3).all(|i| ((i + 1)..3).all(|j| dist(&cand, i, j) == dist(&db, i, j)));
                    if preserves {
                        assert!(
                            ird.contains(&cand),
                            "distance-preserving candidate missing: {va},{vb},{vc}"
                        );
                    }
                }
            }
        }
        assert!(ird.contains(&db));
    }

    #[test]
    fn witness_rule_fixed_cases() {
        let d = DomainSpec::new(5, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let (w, dir) = impossibility_witness(&qd, &v(&[2]), &v(&[4]), DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(w, v(&[3]));
        assert_eq!(dir, WitnessDirection::WitnessMoreProbable);
        let (w, _) = impossibility_witness(&qd, &v(&[5]), &v(&[1]), DEFAULT_QUERY_CAP).unwrap();
        assert_eq!(w, v(&[4]));
    }

    #[test]
    fn witness_strict_inequality_exhaustive_small() {
        // every ordered pair of distinct values on [5]^1 and [3]^2, uniform
        // and a random expressive distribution
        for (n, k) in [(5u32, 1usize), (3, 2)] {
            let d = DomainSpec::new(n, k).unwrap();
            let uniform = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let random = QueryDistribution::new(
                d,
                query_universe(&d, DEFAULT_QUERY_CAP)
                    .unwrap()
                    .into_iter()
                    .map(|q| (q, rat(rng.gen_range(1..=10), 1))),
            )
            .unwrap();
            for qd in [&uniform, &random] {
                let table = qd.cover_table(DEFAULT_QUERY_CAP).unwrap();
                let vals: Vec<Value> = d.values().collect();
                for a in &vals {
                    for b in &vals {
                        if a == b {
                            continue;
                        }
                        let (w, dir) = impossibility_witness(qd, a, b, DEFAULT_QUERY_CAP).unwrap();
                        let d1 = l1_dist(a, b).unwrap();
                        let d2 = l1_dist(a, &w).unwrap();
                        assert_ne!(d1, d2, "a={a} b={b} w={w}");
                        let p1 = table.cover_prob([a, b]).unwrap();
                        let p2 = table.cover_prob([a, &w]).unwrap();
                        match dir {
                            WitnessDirection::WitnessMoreProbable => {
                                assert!(p2 > p1, "a={a} b={b} w={w}")
                            }
                            WitnessDirection::WitnessLessProbable => {
                                assert!(p2 < p1, "a={a} b={b} w={w}")
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witness_rejects_small_domains_and_equal_values() {
        let d = DomainSpec::new(2, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        assert!(matches!(
            impossibility_witness(&qd, &v(&[1]), &v(&[2]), DEFAULT_QUERY_CAP),
            Err(Error::InvalidDomain { .. })
        ));
        let d = DomainSpec::new(5, 1).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        assert!(matches!(
            impossibility_witness(&qd, &v(&[2]), &v(&[2]), DEFAULT_QUERY_CAP),
            Err(Error::IdenticalValues)
        ));
    }

    #[test]
    fn flatten_singletons_randomized_exactness() {
        // random rational-weight distributions over [6]^1 and [3]^2
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, k) in [(6u32, 1usize), (3, 2)] {
            let d = DomainSpec::new(n, k).unwrap();
            for _ in 0..10 {
                let weights: Vec<(QueryRect, BigRational)> = query_universe(&d, DEFAULT_QUERY_CAP)
                    .unwrap()
                    .into_iter()
                    .map(|q| (q, rat(rng.gen_range(0..=6), rng.gen_range(1..=4))))
                    .collect();
                let Ok(qd) = QueryDistribution::new(d, weights) else {
                    continue; // all-zero draw
                };
                let flat = flatten_singletons(&qd, DEFAULT_QUERY_CAP).unwrap();
                let table = flat.cover_table(DEFAULT_QUERY_CAP).unwrap();
                let probs: Vec<BigRational> = d
                    .values()
                    .map(|val| table.cover_prob([&val]).unwrap())
                    .collect();
                assert!(probs.windows(2).all(|w| w[0] == w[1]));
                for (q, w) in qd.iter() {
                    if q.low() != q.high() {
                        assert_eq!(&flat.weight(q), w);
                    } else {
                        assert!(&flat.weight(q) >= w);
                    }
                }
            }
        }
    }

    #[test]
    fn one_is_never_negative_increment() {
        // increments are s_mx - s_t with s_mx the class max, so weights only grow
        let d = DomainSpec::new(4, 2).unwrap();
        let qd = QueryDistribution::uniform(d, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_equidistant(&qd, DEFAULT_QUERY_CAP).unwrap();
        for (q, w) in qd.iter() {
            assert!(flat.weight(q) >= *w, "weight of {q} shrank");
        }
        assert!(flat
            .expressive_witness(DEFAULT_QUERY_CAP)
            .unwrap()
            .is_none());
    }
}
