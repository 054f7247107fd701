//! Acceptance suite: one test per criterion, exact tolerances, one summary
//! line each (run with `--nocapture` to see them alongside cargo's own
//! pass/fail output).

use lama::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn v(coords: &[u32]) -> Value {
    Value::new(coords.to_vec())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The worked two-record instance over [5]: records at 3 and 4 under the
/// 15-query distribution with total weight 42.
fn walkthrough_instance() -> (QueryDistribution, Database) {
    let domain = DomainSpec::new(5, 1).unwrap();
    let weights = [
        (1, 1, 5),
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
    ]
    .map(|(lo, hi, w)| {
        (
            QueryRect::new(v(&[lo]), v(&[hi])).unwrap(),
            BigRational::from_integer(w.into()),
        )
    });
    let qd = QueryDistribution::new(domain, weights).unwrap();
    let db = Database::new(
        domain,
        [("id_a".to_string(), v(&[3])), ("id_b".to_string(), v(&[4]))],
    )
    .unwrap();
    (qd, db)
}

struct RandomInstance {
    qd: QueryDistribution,
    db: Database,
    label: String,
}

/// Random instances drawn from k in {1,2}, N in {3,4}, n in {2,3}, under
/// uniform or seeded-random distributions.
fn random_instances(count: usize, seed: u64) -> Vec<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for trial in 0..count {
        let k = if rng.gen_bool(0.5) { 1 } else { 2 };
        let n = if rng.gen_bool(0.5) { 3 } else { 4 };
        let records = if rng.gen_bool(0.5) { 2 } else { 3 };
        let domain = DomainSpec::new(n, k).unwrap();
        let values: Vec<Value> = domain.values().collect();
        let mut picked = BTreeSet::new();
        while picked.len() < records {
            picked.insert(rng.gen_range(0..values.len()));
        }
        let db = Database::new(
            domain,
            picked
                .iter()
                .enumerate()
                .map(|(i, &vi)| (format!("r{i}"), values[vi].clone())),
        )
        .unwrap();
        let uniform = rng.gen_bool(0.5);
        let qd = if uniform {
            QueryDistribution::uniform(domain, DEFAULT_QUERY_CAP).unwrap()
        } else {
            let weights: Vec<_> = query_universe(&domain, DEFAULT_QUERY_CAP)
                .unwrap()
                .into_iter()
                .map(|q| {
                    let w: i64 = rng.gen_range(1..=10);
                    (q, BigRational::from_integer(w.into()))
                })
                .collect();
            QueryDistribution::new(domain, weights).unwrap()
        };
        let label = format!(
            "trial {trial}: k={k} N={n} n={records} qd={}",
            if uniform { "uniform" } else { "random" }
        );
        out.push(RandomInstance { qd, db, label });
    }
    out
}

fn sorted_value_tuples(dbs: &[Database]) -> Vec<Vec<Value>> {
    let mut out: Vec<Vec<Value>> = dbs
        .iter()
        .map(|d| d.iter().map(|(_, val)| val.clone()).collect())
        .collect();
    out.sort();
    out
}

#[test]
fn c01_full_attack_equals_response_distribution_oracle() {
    // >= 50 random instances; the full-selector attack in exact mode must
    // return exactly the brute-force identical-response-distribution class.
    let instances = random_instances(50, 0xA11CE);
    for inst in &instances {
        let source = FrequencySource::Exact { db: &inst.db };
        let t_max = 2 * inst.db.domain().k;
        let report = run_attack(
            &inst.qd,
            &source,
            SelectorKind::Full,
            t_max,
            &AttackConfig::default(),
        )
        .unwrap();
        let oracle = ird_enumerate(&inst.qd, &inst.db, DEFAULT_ORACLE_CAP).unwrap();
        let got = sorted_value_tuples(&report.final_set.databases(*inst.db.domain()).unwrap());
        let want = sorted_value_tuples(&oracle);
        assert_eq!(got, want, "{}", inst.label);
        assert!(
            report.final_set.contains_database(&inst.db),
            "{}",
            inst.label
        );
    }
    println!(
        "[PASS] c01: full attack equals the oracle on {} instances",
        instances.len()
    );
}

#[test]
fn c02_trimmed_selector_provably_weaker_at_n6() {
    for k in [1usize, 2] {
        let inst = build_instance(k, 6, DEFAULT_QUERY_CAP).unwrap();
        let record = verify_instance(&inst, &AttackConfig::default()).unwrap();
        assert!(
            record.accepted_by_trimmed,
            "k={k}: decoy must pass the trimmed selector"
        );
        assert!(
            record.rejected_by_full,
            "k={k}: decoy must fail the full selector"
        );
        assert!(
            record.strict_subsets_match,
            "k={k}: strict-subset probabilities must match"
        );
        assert!(record.full_set_gap > BigRational::zero(), "k={k}");
        assert!(record.cancellation_identity_holds, "k={k}");
    }
    println!("[PASS] c02: size-2k tests are necessary at k=1,2 (N=6)");
}

#[test]
fn c03_uniform_1d_collapses_to_reflection_pair() {
    // 20 random 1-d databases with 10 distinct values in [1000] under the
    // uniform distribution: after t = 2 exactly two reconstructions remain
    // (one only if the database were its own reflection).
    let domain = DomainSpec::new(1000, 1).unwrap();
    let qd = QueryDistribution::uniform(domain, DEFAULT_QUERY_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF16);
    let axes: BTreeSet<usize> = [0].into();
    for trial in 0..20 {
        let mut picked = BTreeSet::new();
        while picked.len() < 10 {
            picked.insert(rng.gen_range(1..=1000u32));
        }
        let db = Database::new(
            domain,
            picked
                .iter()
                .enumerate()
                .map(|(i, &x)| (format!("r{i:02}"), v(&[x]))),
        )
        .unwrap();
        let source = FrequencySource::Exact { db: &db };
        let report = run_attack(
            &qd,
            &source,
            SelectorKind::Full,
            2,
            &AttackConfig::default(),
        )
        .unwrap();
        let expected = if db.reflect(&axes) == db { 1 } else { 2 };
        assert_eq!(
            report.final_set.count,
            SolutionCount::Exact(expected),
            "trial {trial}"
        );
        assert!(report.final_set.contains_database(&db), "trial {trial}");
        assert!(
            report.final_set.contains_database(&db.reflect(&axes)),
            "trial {trial}"
        );
    }
    println!("[PASS] c03: 1-d uniform reconstructions collapse to the reflection pair (20 trials)");
}

#[test]
fn c04_walkthrough_regression() {
    let (qd, db) = walkthrough_instance();
    let table = qd.cover_table(DEFAULT_QUERY_CAP).unwrap();
    let source = FrequencySource::Exact { db: &db };
    let ids: BTreeSet<RecordId> = ["id_a".to_string(), "id_b".to_string()].into();
    let fresh = CandidateTable::new(&ids, qd.domain());

    let single = LeftExpr::new(["id_a".to_string()]).unwrap();
    let singles = find_matches(&table, &source, &single, &fresh, false).unwrap();
    assert_eq!(
        singles
            .iter()
            .map(|m| m.right[0].clone())
            .collect::<Vec<_>>(),
        vec![v(&[2]), v(&[3])]
    );

    let pair = LeftExpr::new(["id_a".to_string(), "id_b".to_string()]).unwrap();
    let pairs = find_matches(&table, &source, &pair, &fresh, false).unwrap();
    assert_eq!(
        pairs.iter().map(|m| m.right.clone()).collect::<Vec<_>>(),
        vec![vec![v(&[3]), v(&[4])], vec![v(&[4]), v(&[3])]]
    );

    let formula = build_formula(&[(single, singles), (pair, pairs)]);
    let solutions = solve_all(&formula, qd.domain(), &ids, 100, 1_000_000).unwrap();
    assert_eq!(solutions.count, SolutionCount::Exact(1));
    assert_eq!(solutions.solutions, vec![vec![v(&[3]), v(&[4])]]);

    // the full pipeline agrees
    let report = run_attack(
        &qd,
        &source,
        SelectorKind::Full,
        2,
        &AttackConfig::default(),
    )
    .unwrap();
    assert_eq!(report.final_set.count, SolutionCount::Exact(1));
    assert_eq!(report.final_set.solutions, vec![vec![v(&[3]), v(&[4])]]);
    println!("[PASS] c04: walkthrough instance reproduces matches {{2,3}}, pairs {{(3,4),(4,3)}}, final (3,4)");
}

#[test]
fn c05_singleton_flattening_equalizes_values_on_random_distributions() {
    // 50 random rational-weight distributions over domains up to [6]^2
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let domains = [
        (3u32, 1usize),
        (4, 1),
        (5, 1),
        (6, 1),
        (3, 2),
        (4, 2),
        (5, 2),
        (6, 2),
    ];
    let mut done = 0;
    while done < 50 {
        let (n, k) = domains[rng.gen_range(0..domains.len())];
        let domain = DomainSpec::new(n, k).unwrap();
        let weights: Vec<_> = query_universe(&domain, DEFAULT_QUERY_CAP)
            .unwrap()
            .into_iter()
            .map(|q| (q, rat(rng.gen_range(0..=9), rng.gen_range(1..=5))))
            .collect();
        let Ok(qd) = QueryDistribution::new(domain, weights) else {
            continue; // all-zero draw; redraw
        };
        let flat = flatten_singletons(&qd, DEFAULT_QUERY_CAP).unwrap();
        let table = flat.cover_table(DEFAULT_QUERY_CAP).unwrap();
        let mut probs = domain.values().map(|val| table.cover_prob([&val]).unwrap());
        let first = probs.next().unwrap();
        assert!(
            probs.all(|p| p == first),
            "singleton probabilities unequal on [{n}]^{k}"
        );
        for (q, w) in qd.iter() {
            if q.low() != q.high() {
                assert_eq!(
                    &flat.weight(q),
                    w,
                    "non-point query {q} changed on [{n}]^{k}"
                );
            }
        }
        done += 1;
    }
    println!("[PASS] c05: singleton flattening exactly equalizes 50 random distributions");
}

#[test]
fn c06_pair_flattening_on_uniform_4x4() {
    let domain = DomainSpec::new(4, 2).unwrap();
    let uniform = QueryDistribution::uniform(domain, DEFAULT_QUERY_CAP).unwrap();
    let before = audit_flatness(&uniform, DEFAULT_QUERY_CAP).unwrap();
    assert_eq!(before.classes.len(), 7);
    assert!(
        !before.class(1).unwrap().is_flat(),
        "uniform [4]^2 must not be flat at distance 1"
    );
    let flat = flatten_equidistant(&uniform, DEFAULT_QUERY_CAP).unwrap();
    let after = audit_flatness(&flat, DEFAULT_QUERY_CAP).unwrap();
    assert_eq!(after.classes.len(), 7);
    assert!(after.all_flat());
    let twice = flatten_equidistant(&flat, DEFAULT_QUERY_CAP).unwrap();
    assert_eq!(flat, twice, "pair flattening must be idempotent");
    println!(
        "[PASS] c06: pair flattening flattens all 7 distance classes of [4]^2 and is idempotent"
    );
}

#[test]
fn c07_flattened_ird_is_the_distance_preserving_class() {
    // two records under the flattened distribution: the indistinguishable
    // class is exactly every placement at the same L1 distance
    let cases = [
        (DomainSpec::new(4, 2).unwrap(), [v(&[1, 2]), v(&[3, 3])]),
        (DomainSpec::new(5, 1).unwrap(), [v(&[2]), v(&[5])]),
    ];
    for (domain, values) in cases {
        let uniform = QueryDistribution::uniform(domain, DEFAULT_QUERY_CAP).unwrap();
        let flat = flatten_equidistant(&uniform, DEFAULT_QUERY_CAP).unwrap();
        let db = Database::new(
            domain,
            [
                ("a".to_string(), values[0].clone()),
                ("b".to_string(), values[1].clone()),
            ],
        )
        .unwrap();
        let d = l1_dist(&values[0], &values[1]).unwrap();
        let ird = ird_enumerate(&flat, &db, DEFAULT_ORACLE_CAP).unwrap();
        let got = sorted_value_tuples(&ird);
        let all: Vec<Value> = domain.values().collect();
        let mut want: Vec<Vec<Value>> = Vec::new();
        for x in &all {
            for y in &all {
                if x != y && l1_dist(x, y).unwrap() == d {
                    want.push(vec![x.clone(), y.clone()]);
                }
            }
        }
        want.sort();
        assert_eq!(got, want, "domain {domain}, distance {d}");
    }
    println!(
        "[PASS] c07: flattened-distribution oracle class = all distance-preserving placements"
    );
}

#[test]
fn c08_cross_distance_witness_always_strict() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x77);
    for (n, k) in [(5u32, 1usize), (4, 2)] {
        let domain = DomainSpec::new(n, k).unwrap();
        let values: Vec<Value> = domain.values().collect();
        for qd_seed in 0..5u64 {
            let weights: Vec<_> = query_universe(&domain, DEFAULT_QUERY_CAP)
                .unwrap()
                .into_iter()
                .map(|q| (q, rat(rng.gen_range(1..=12), rng.gen_range(1..=3))))
                .collect();
            let qd = QueryDistribution::new(domain, weights).unwrap();
            qd.require_expressive(DEFAULT_QUERY_CAP).unwrap();
            let table = qd.cover_table(DEFAULT_QUERY_CAP).unwrap();
            for _ in 0..100 {
                let a = values[rng.gen_range(0..values.len())].clone();
                let mut b = values[rng.gen_range(0..values.len())].clone();
                while b == a {
                    b = values[rng.gen_range(0..values.len())].clone();
                }
                let (w, _) = impossibility_witness(&qd, &a, &b, DEFAULT_QUERY_CAP).unwrap();
                assert_ne!(l1_dist(&a, &b).unwrap(), l1_dist(&a, &w).unwrap());
                let p1 = table.cover_prob([&a, &b]).unwrap();
                let p2 = table.cover_prob([&a, &w]).unwrap();
                assert_ne!(p1, p2, "[{n}]^{k} seed {qd_seed}: v={a} v'={b} witness={w}");
            }
        }
    }
    println!(
        "[PASS] c08: witness gives strict inequality on 100 pairs x 5 distributions x 2 domains"
    );
}

#[test]
fn c09_counts_monotone_and_pruning_neutral() {
    // on the criterion-1 instances: per-round counts never increase, and
    // disabling candidate pruning leaves the final set unchanged
    let instances = random_instances(50, 0xA11CE);
    for inst in &instances {
        let source = FrequencySource::Exact { db: &inst.db };
        let t_max = 2 * inst.db.domain().k;
        let pruned = run_attack(
            &inst.qd,
            &source,
            SelectorKind::Full,
            t_max,
            &AttackConfig::default(),
        )
        .unwrap();
        for w in pruned.rounds.windows(2) {
            let a = w[0].reconstructions.exact().expect("exact count");
            let b = w[1].reconstructions.exact().expect("exact count");
            assert!(
                b <= a,
                "{}: counts increased from t={} to t={}",
                inst.label,
                w[0].t,
                w[1].t
            );
        }
        let naive = run_attack(
            &inst.qd,
            &source,
            SelectorKind::Full,
            t_max,
            &AttackConfig {
                prune: false,
                ..AttackConfig::default()
            },
        )
        .unwrap();
        let mut a = pruned.final_set.solutions.clone();
        let mut b = naive.final_set.solutions.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{}", inst.label);
        assert_eq!(
            pruned.final_set.count, naive.final_set.count,
            "{}",
            inst.label
        );
    }
    println!("[PASS] c09: monotone counts and pruning neutrality on 50 instances");
}

#[test]
fn c10_empirical_frequencies_converge() {
    // walkthrough instance, 100 seeds, 100k samples: both singleton
    // frequencies within 0.01 of the exact values in at least 95 seeds
    let (qd, db) = walkthrough_instance();
    let exact_a = rat(23, 42);
    let exact_b = rat(19, 42);
    let tolerance = rat(1, 100);
    let mut good = 0;
    for seed in 0..100u64 {
        let trace = sample_leakage(&qd, &db, 100_000, seed).unwrap();
        let m = BigInt::from(trace.responses.len());
        let count_a = trace.containment_count(&["id_a".to_string()].into());
        let count_b = trace.containment_count(&["id_b".to_string()].into());
        let f_a = BigRational::new(BigInt::from(count_a), m.clone());
        let f_b = BigRational::new(BigInt::from(count_b), m.clone());
        if (f_a - &exact_a).abs() <= tolerance && (f_b - &exact_b).abs() <= tolerance {
            good += 1;
        }
    }
    assert!(good >= 95, "only {good}/100 seeds within tolerance");
    println!("[PASS] c10: empirical frequencies within 0.01 in {good}/100 seeds");
}

#[test]
fn c11_external_dataset_counts_not_targeted() {
    // Absolute reconstruction/match counts reported for the proprietary
    // hospital dataset depend on an unavailable sample; they are not
    // asserted anywhere in this suite. The structural and property checks
    // of c01-c10 stand in for them. This test documents that substitution
    // and pins the one structural fact those tables share: counts are
    // per-(distribution, k, t) cells, which the report layout preserves.
    let header = "distribution,k,t,matches,reconstructions,elapsed_ms";
    let report = ExperimentReport {
        config_hash: String::new(),
        seed: 0,
        cells: vec![],
        warnings: vec![],
    };
    assert!(report.to_csv_string().starts_with(header));
    println!("[PASS] c11: unavailable-sample absolute counts declared out of scope");
}
