//! Property tests for the geometric and probabilistic invariants.

use lama::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn arb_domain() -> impl Strategy<Value = DomainSpec> {
    (2u32..=5, 1usize..=3).prop_map(|(n, k)| DomainSpec::new(n, k).unwrap())
}

fn arb_value(domain: DomainSpec) -> impl Strategy<Value = Value> {
    proptest::collection::vec(1..=domain.n, domain.k).prop_map(Value::new)
}

fn arb_value_set(domain: DomainSpec) -> impl Strategy<Value = BTreeSet<Value>> {
    proptest::collection::btree_set(arb_value(domain), 1..=6)
}

fn arb_query(domain: DomainSpec) -> impl Strategy<Value = QueryRect> {
    (arb_value(domain), arb_value(domain)).prop_map(|(a, b)| {
        let lo: Vec<u32> = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| *x.min(y))
            .collect();
        let hi: Vec<u32> = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| *x.max(y))
            .collect();
        QueryRect::new(Value::new(lo), Value::new(hi)).unwrap()
    })
}

fn arb_database(domain: DomainSpec) -> impl Strategy<Value = Database> {
    arb_value_set(domain).prop_map(move |values| {
        Database::new(
            domain,
            values
                .into_iter()
                .enumerate()
                .map(|(i, v)| (format!("r{i}"), v)),
        )
        .unwrap()
    })
}

fn arb_distribution(domain: DomainSpec) -> impl Strategy<Value = QueryDistribution> {
    let universe = query_universe(&domain, DEFAULT_QUERY_CAP).unwrap();
    let len = universe.len();
    proptest::collection::vec(0u8..=6, len).prop_filter_map("all-zero weights", move |ws| {
        if ws.iter().all(|&w| w == 0) {
            return None;
        }
        let weights = universe.iter().cloned().zip(
            ws.iter()
                .map(|&w| BigRational::from_integer(BigInt::from(w))),
        );
        Some(QueryDistribution::new(domain, weights).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A query covers every value of a set iff it covers both corners of the
    /// set's minimum bounding query.
    #[test]
    fn covering_a_set_reduces_to_its_bounding_corners(
        (domain, values, q) in arb_domain().prop_flat_map(|d| {
            (Just(d), arb_value_set(d), arb_query(d))
        })
    ) {
        let _ = domain;
        let rect = mbq(values.iter()).unwrap();
        let covers_all = values.iter().all(|v| covers(&q, v).unwrap());
        let covers_corners =
            covers(&q, rect.low()).unwrap() && covers(&q, rect.high()).unwrap();
        prop_assert_eq!(covers_all, covers_corners);
    }

    /// The minimum bounding query of a pair has size equal to their distance.
    #[test]
    fn pair_bounding_query_size_is_distance(
        (domain, a, b) in arb_domain().prop_flat_map(|d| {
            (Just(d), arb_value(d), arb_value(d))
        })
    ) {
        let _ = domain;
        let rect = mbq([&a, &b]).unwrap();
        prop_assert_eq!(rect.size(), l1_dist(&a, &b).unwrap());
    }

    /// Responses are definitionally the covered records.
    #[test]
    fn response_is_pointwise_coverage(
        (domain, db, q) in arb_domain().prop_flat_map(|d| {
            (Just(d), arb_database(d), arb_query(d))
        })
    ) {
        let _ = domain;
        let rsp = db.response(&q).unwrap();
        for (id, v) in db.iter() {
            prop_assert_eq!(rsp.contains(id), covers(&q, v).unwrap());
        }
    }

    /// Reflection is an involution and preserves pairwise distances.
    #[test]
    fn reflection_involution(
        (domain, db, axes) in arb_domain().prop_flat_map(|d| {
            (Just(d), arb_database(d), proptest::collection::btree_set(0..d.k, 0..=d.k))
        })
    ) {
        let _ = domain;
        let r = db.reflect(&axes);
        prop_assert_eq!(&r.reflect(&axes), &db);
        let ids: Vec<&RecordId> = db.ids().collect();
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                let before = l1_dist(db.get(ids[i]).unwrap(), db.get(ids[j]).unwrap()).unwrap();
                let after = l1_dist(r.get(ids[i]).unwrap(), r.get(ids[j]).unwrap()).unwrap();
                prop_assert_eq!(before, after);
            }
        }
    }
}

proptest! {
    // distribution-level checks are heavier; keep the case count small
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Response probabilities sum to exactly one, and the joint retrieval
    /// frequency of any record subset equals the sum over the responses
    /// containing it.
    #[test]
    fn response_distribution_consistency(
        (domain, db, qd) in (2u32..=4, 1usize..=2)
            .prop_map(|(n, k)| DomainSpec::new(n, k).unwrap())
            .prop_flat_map(|d| (Just(d), arb_database(d), arb_distribution(d)))
    ) {
        let _ = domain;
        let rd = qd.response_distribution(&db, DEFAULT_QUERY_CAP).unwrap();
        prop_assert_eq!(rd.total(), BigRational::one());

        let table = qd.cover_table(DEFAULT_QUERY_CAP).unwrap();
        let ids: Vec<RecordId> = db.ids().cloned().collect();
        // singletons and one larger subset
        let mut subsets: Vec<Vec<RecordId>> = ids.iter().map(|i| vec![i.clone()]).collect();
        subsets.push(ids.clone());
        for subset in subsets {
            let freq = table.retrieval_freq(&db, subset.iter()).unwrap();
            let mut total = BigRational::zero();
            let want: BTreeSet<RecordId> = subset.iter().cloned().collect();
            for (rsp, p) in rd.iter() {
                let rsp_set: BTreeSet<RecordId> = rsp.iter().cloned().collect();
                if want.is_subset(&rsp_set) {
                    total += p;
                }
            }
            prop_assert_eq!(&freq, &total);
        }
    }

    /// The cover table agrees with direct per-query summation everywhere.
    #[test]
    fn cover_table_equals_direct_summation(
        (domain, qd) in (2u32..=4, 1usize..=2)
            .prop_map(|(n, k)| DomainSpec::new(n, k).unwrap())
            .prop_flat_map(|d| (Just(d), arb_distribution(d)))
    ) {
        let table = qd.cover_table(DEFAULT_QUERY_CAP).unwrap();
        for r in query_universe(&domain, DEFAULT_QUERY_CAP).unwrap() {
            let mut direct = BigRational::zero();
            for (q, w) in qd.iter() {
                if r.within(q).unwrap() {
                    direct += w;
                }
            }
            prop_assert_eq!(table.rect_cover_weight(&r), direct);
        }
    }

    /// Singleton flattening leaves every value at one common probability.
    #[test]
    fn singleton_flattening_is_flat(
        (domain, qd) in (2u32..=4, 1usize..=2)
            .prop_map(|(n, k)| DomainSpec::new(n, k).unwrap())
            .prop_flat_map(|d| (Just(d), arb_distribution(d)))
    ) {
        let flat = flatten_singletons(&qd, DEFAULT_QUERY_CAP).unwrap();
        let table = flat.cover_table(DEFAULT_QUERY_CAP).unwrap();
        let mut probs = domain.values().map(|v| table.cover_prob([&v]).unwrap());
        let first = probs.next().unwrap();
        prop_assert!(probs.all(|p| p == first));
    }
}
