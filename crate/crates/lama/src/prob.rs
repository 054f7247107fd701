//! Exact-rational probabilities of retrieval events.
//!
//! A query distribution assigns a nonnegative rational weight to every query
//! in the universe; probabilities come from lazy normalization. The central
//! object is the [`CoverTable`], a dominance-prefix-sum table over corner
//! pairs: the entry for a rectangle `r` is the total weight of queries
//! covering both corners of `r`. Because a query covers a value set iff it
//! covers the two corners of the set's minimum bounding query, one table
//! lookup answers any "probability that all of V is retrieved together"
//! question exactly.
//!
//! The module also simulates access-pattern leakage (i.i.d. queries, observed
//! responses) and provides the brute-force identical-response-distribution
//! oracle used to judge attack output.

use crate::domain::{mbq, query_universe, Database, DomainSpec, QueryRect, RecordId, Value};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Default ceiling on candidate databases for [`ird_enumerate`]. The oracle
/// exists for acceptance checks, not production attacks.
pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

/// A distribution over the query universe, kept as unnormalized nonnegative
/// rational weights. Queries absent from the map have weight zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryDistribution {
    domain: DomainSpec,
    weights: BTreeMap<QueryRect, BigRational>,
}

impl QueryDistribution {
    pub fn new(
        domain: DomainSpec,
        weights: impl IntoIterator<Item = (QueryRect, BigRational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = BigRational::zero();
        for (q, w) in weights {
            if q.low().dim() != domain.k {
                return Err(Error::DimensionMismatch {
                    expected: domain.k,
                    got: q.low().dim(),
                });
            }
            if !domain.contains(q.low()) || !domain.contains(q.high()) {
                return Err(Error::InvalidQuery(q.to_string()));
            }
            if w.is_negative() {
                return Err(Error::NegativeWeight(q));
            }
            total += &w;
            map.insert(q, w);
        }
        if total.is_zero() {
            return Err(Error::EmptyDistribution);
        }
        Ok(QueryDistribution {
            domain,
            weights: map,
        })
    }

    /// Every query in the universe at weight 1.
    pub fn uniform(domain: DomainSpec, cap: u128) -> Result<Self> {
        let qs = query_universe(&domain, cap)?;
        QueryDistribution::new(domain, qs.into_iter().map(|q| (q, BigRational::one())))
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn weight(&self, q: &QueryRect) -> BigRational {
        self.weights
            .get(q)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_weight(&self) -> BigRational {
        self.weights.values().sum()
    }

    /// Normalized probability of a single query.
    pub fn probability(&self, q: &QueryRect) -> BigRational {
        self.weight(q) / self.total_weight()
    }

    /// Weighted queries in lexicographic `(low, high)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&QueryRect, &BigRational)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Replaces the weight of one query (used by the flattening passes).
    pub fn set_weight(&mut self, q: QueryRect, w: BigRational) -> Result<()> {
        if w.is_negative() {
            return Err(Error::NegativeWeight(q));
        }
        self.weights.insert(q, w);
        Ok(())
    }

    pub fn add_weight(&mut self, q: QueryRect, delta: &BigRational) -> Result<()> {
        let w = self.weight(&q) + delta;
        self.set_weight(q, w)
    }

    /// Checks that every query in the universe has strictly positive weight;
    /// the first zero-weight query is returned as the witness.
    pub fn expressive_witness(&self, cap: u128) -> Result<Option<QueryRect>> {
        for q in query_universe(&self.domain, cap)? {
            if self.weight(&q).is_zero() {
                return Ok(Some(q));
            }
        }
        Ok(None)
    }

    pub fn require_expressive(&self, cap: u128) -> Result<()> {
        match self.expressive_witness(cap)? {
            Some(witness) => Err(Error::NonExpressive { witness }),
            None => Ok(()),
        }
    }

    /// Builds the cover table for this distribution.
    pub fn cover_table(&self, cap: u128) -> Result<CoverTable> {
        CoverTable::build(self, cap)
    }

    /// Induced distribution over responses for a database.
    pub fn response_distribution(&self, db: &Database, cap: u128) -> Result<ResponseDistribution> {
        let total = self.total_weight();
        if total.is_zero() {
            return Err(Error::EmptyDistribution);
        }
        let _guard = query_universe(&self.domain, cap)?; // enforce the cap uniformly
        let mut probs: BTreeMap<Vec<RecordId>, BigRational> = BTreeMap::new();
        for (q, w) in &self.weights {
            if w.is_zero() {
                continue;
            }
            let rsp: Vec<RecordId> = db.response(q)?.into_iter().collect();
            *probs.entry(rsp).or_insert_with(BigRational::zero) += w;
        }
        for p in probs.values_mut() {
            *p /= &total;
        }
        Ok(ResponseDistribution {
            db: db.clone(),
            probs,
        })
    }

    // --- file format ---------------------------------------------------
    //
    // Header `N=<int> k=<int>`, then one query per line:
    //   lo_1,...,lo_k ; hi_1,...,hi_k ; numerator/denominator
    // Zero-weight queries are omitted on write and accepted on read.

    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "N={} k={}", self.domain.n, self.domain.k)?;
        for (q, weight) in &self.weights {
            if weight.is_zero() {
                continue;
            }
            let lo: Vec<String> = q.low().coords().iter().map(u32::to_string).collect();
            let hi: Vec<String> = q.high().coords().iter().map(u32::to_string).collect();
            writeln!(
                w,
                "{} ; {} ; {}/{}",
                lo.join(","),
                hi.join(","),
                weight.numer(),
                weight.denom()
            )?;
        }
        Ok(())
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.to_writer(std::io::BufWriter::new(f))
    }

    pub fn from_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = header?;
        let domain = parse_header(&header)?;
        let mut weights = Vec::new();
        let mut seen: BTreeSet<QueryRect> = BTreeSet::new();
        for (i, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            let mut parts = line.splitn(3, ';');
            let lo = parse_coords(parts.next(), lineno)?;
            let hi = parse_coords(parts.next(), lineno)?;
            let w = parse_weight(parts.next(), lineno)?;
            let low = Value::checked(lo, &domain).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            let high = Value::checked(hi, &domain).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            let q = QueryRect::new(low, high).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            if !seen.insert(q.clone()) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("duplicate query {q}"),
                });
            }
            weights.push((q, w));
        }
        QueryDistribution::new(domain, weights)
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        QueryDistribution::from_reader(f)
    }
}

fn parse_header(line: &str) -> Result<DomainSpec> {
    let err = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.to_string(),
    };
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        if let Some(v) = tok.strip_prefix("N=") {
            n = Some(v.parse::<u32>().map_err(|_| err("bad N"))?);
        } else if let Some(v) = tok.strip_prefix("k=") {
            k = Some(v.parse::<usize>().map_err(|_| err("bad k"))?);
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => DomainSpec::new(n, k),
        _ => Err(err("expected `N=<int> k=<int>`")),
    }
}

fn parse_coords(part: Option<&str>, line: usize) -> Result<Vec<u32>> {
    let s = part.ok_or_else(|| Error::Parse {
        line,
        msg: "expected `lo ; hi ; weight`".into(),
    })?;
    s.trim()
        .split(',')
        .map(|c| {
            c.trim().parse::<u32>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad coordinate `{c}`"),
            })
        })
        .collect()
}

fn parse_weight(part: Option<&str>, line: usize) -> Result<BigRational> {
    let s = part
        .ok_or_else(|| Error::Parse {
            line,
            msg: "expected `lo ; hi ; weight`".into(),
        })?
        .trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad weight `{s}`"),
    })?;
    let den: BigInt = den.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad weight `{s}`"),
    })?;
    if den.is_zero() {
        return Err(Error::Parse {
            line,
            msg: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(num, den))
}

/// Dominance-prefix-sum table over corner pairs.
///
/// Weights are scaled by the least common denominator so every cell is an
/// integer; `cover sum(r) = cells[r] / scale`, and probabilities cancel the
/// scale entirely.
pub struct CoverTable {
    domain: DomainSpec,
    cells: Vec<BigInt>,
    scale: BigInt,
    total_scaled: BigInt,
}

impl CoverTable {
    pub fn build(qd: &QueryDistribution, cap: u128) -> Result<Self> {
        let domain = *qd.domain();
        let n = domain.n as usize;
        let k = domain.k;
        let entries = domain.value_count().checked_mul(domain.value_count());
        match entries {
            Some(e) if e <= cap => {}
            _ => {
                return Err(Error::CapExceeded {
                    what: "cover table",
                    needed: entries.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        let mut scale = BigInt::one();
        for w in qd.weights.values() {
            scale = scale.lcm(w.denom());
        }
        let size = (domain.value_count() * domain.value_count()) as usize;
        let mut cells = vec![BigInt::zero(); size];
        for (q, w) in &qd.weights {
            if w.is_zero() {
                continue;
            }
            let scaled = w.numer() * (&scale / w.denom());
            cells[cell_index(&domain, q.low(), q.high())] += scaled;
        }
        // Ascending prefix over the low corner, descending over the high
        // corner: afterwards cells[(lo,hi)] sums the weights of all queries
        // [a,b] with a <= lo and b >= hi componentwise.
        let dims = 2 * k;
        for d in 0..dims {
            let stride = n.pow((dims - 1 - d) as u32);
            accumulate_axis(&mut cells, n, stride, d < k);
        }
        let top = cell_index(
            &domain,
            &Value::new(vec![domain.n; k]),
            &Value::new(vec![1; k]),
        );
        let total_scaled = cells[top].clone();
        if total_scaled.is_zero() {
            return Err(Error::EmptyDistribution);
        }
        Ok(CoverTable {
            domain,
            cells,
            scale,
            total_scaled,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Total weight of queries covering both corners of `r`, as a weight
    /// (same units as the input distribution).
    pub fn rect_cover_weight(&self, r: &QueryRect) -> BigRational {
        let scaled = self.cells[cell_index(&self.domain, r.low(), r.high())].clone();
        BigRational::new(scaled, self.scale.clone())
    }

    /// Normalized probability that a sampled query covers both corners of `r`.
    pub fn rect_cover_prob(&self, r: &QueryRect) -> BigRational {
        let scaled = self.cells[cell_index(&self.domain, r.low(), r.high())].clone();
        BigRational::new(scaled, self.total_scaled.clone())
    }

    /// Probability that one sampled query covers every value in `values`.
    pub fn cover_prob<'a, I>(&self, values: I) -> Result<BigRational>
    where
        I: IntoIterator<Item = &'a Value>,
    {
        let rect = mbq(values)?;
        Ok(self.rect_cover_prob(&rect))
    }

    /// Same as [`CoverTable::cover_prob`] but unnormalized.
    pub fn cover_weight<'a, I>(&self, values: I) -> Result<BigRational>
    where
        I: IntoIterator<Item = &'a Value>,
    {
        let rect = mbq(values)?;
        Ok(self.rect_cover_weight(&rect))
    }

    /// Limit frequency with which all records of `ids` appear together in a
    /// response: the cover probability of their values.
    pub fn retrieval_freq<'a, I>(&self, db: &Database, ids: I) -> Result<BigRational>
    where
        I: IntoIterator<Item = &'a RecordId>,
    {
        let mut values = Vec::new();
        for id in ids {
            values.push(db.value_of(id)?);
        }
        if values.is_empty() {
            return Err(Error::EmptyValueSet);
        }
        self.cover_prob(values)
    }

    pub fn total_weight(&self) -> BigRational {
        BigRational::new(self.total_scaled.clone(), self.scale.clone())
    }
}

fn cell_index(domain: &DomainSpec, lo: &Value, hi: &Value) -> usize {
    let n = domain.n as usize;
    let mut idx = 0usize;
    for &c in lo.coords() {
        idx = idx * n + (c as usize - 1);
    }
    for &c in hi.coords() {
        idx = idx * n + (c as usize - 1);
    }
    idx
}

fn accumulate_axis(cells: &mut [BigInt], n: usize, stride: usize, ascending: bool) {
    let block = stride * n;
    let len = cells.len();
    let mut base = 0;
    while base < len {
        for off in 0..stride {
            if ascending {
                for i in 1..n {
                    let idx = base + off + i * stride;
                    let (left, right) = cells.split_at_mut(idx);
                    right[0] += &left[idx - stride];
                }
            } else {
                for i in (0..n - 1).rev() {
                    let idx = base + off + i * stride;
                    let (left, right) = cells.split_at_mut(idx + stride);
                    left[idx] += &right[0];
                }
            }
        }
        base += block;
    }
}

/// Sparse distribution over responses, keyed by canonically sorted id sets.
/// Only the support (positive-probability responses) is stored; probabilities
/// sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseDistribution {
    db: Database,
    probs: BTreeMap<Vec<RecordId>, BigRational>,
}

impl ResponseDistribution {
    pub fn database(&self) -> &Database {
        &self.db
    }

    pub fn prob(&self, response: &BTreeSet<RecordId>) -> BigRational {
        let key: Vec<RecordId> = response.iter().cloned().collect();
        self.probs
            .get(&key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<RecordId>, &BigRational)> {
        self.probs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().sum()
    }

    /// True iff both distributions assign identical probabilities (zero
    /// entries never stored, so map equality is distribution equality).
    pub fn same_distribution(&self, other: &ResponseDistribution) -> bool {
        self.probs == other.probs
    }
}

/// An observed access-pattern stream: the responses of `m` i.i.d. queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakageTrace {
    pub responses: Vec<BTreeSet<RecordId>>,
    pub seed: u64,
    pub samples: usize,
}

impl LeakageTrace {
    /// Fraction of responses containing every id of `ids`. Empty `ids` is
    /// vacuously contained in every response.
    pub fn empirical_freq(&self, ids: &BTreeSet<RecordId>) -> f64 {
        self.containment_count(ids) as f64 / self.responses.len() as f64
    }

    /// Exact count behind [`LeakageTrace::empirical_freq`], for rational
    /// tolerance tests.
    pub fn containment_count(&self, ids: &BTreeSet<RecordId>) -> usize {
        self.responses.iter().filter(|r| ids.is_subset(r)).count()
    }

    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "M={} seed={}", self.samples, self.seed)?;
        for r in &self.responses {
            if r.is_empty() {
                writeln!(w, "-")?;
            } else {
                let ids: Vec<&str> = r.iter().map(String::as_str).collect();
                writeln!(w, "{}", ids.join(","))?;
            }
        }
        Ok(())
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.to_writer(std::io::BufWriter::new(f))
    }

    pub fn from_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })??;
        let mut m = None;
        let mut seed = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("M=") {
                m = Some(v.parse::<usize>().map_err(|_| Error::Parse {
                    line: 1,
                    msg: "bad M".into(),
                })?);
            } else if let Some(v) = tok.strip_prefix("seed=") {
                seed = Some(v.parse::<u64>().map_err(|_| Error::Parse {
                    line: 1,
                    msg: "bad seed".into(),
                })?);
            }
        }
        let (samples, seed) = match (m, seed) {
            (Some(m), Some(s)) => (m, s),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "expected `M=<int> seed=<int>`".into(),
                })
            }
        };
        let mut responses = Vec::with_capacity(samples);
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "-" {
                responses.push(BTreeSet::new());
            } else {
                responses.push(line.split(',').map(|s| s.trim().to_string()).collect());
            }
        }
        Ok(LeakageTrace {
            responses,
            seed,
            samples,
        })
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        LeakageTrace::from_reader(f)
    }
}

/// Simulates the access pattern of `m` i.i.d. queries.
///
/// Queries are drawn by inverse CDF over the lexicographic `(low, high)`
/// order, using a ChaCha PRNG seeded from `seed`, so traces are reproducible
/// across runs and platforms. The CDF uses `f64` partial sums; this only
/// perturbs sampling at machine precision and never affects exact-mode
/// analysis.
pub fn sample_leakage(
    qd: &QueryDistribution,
    db: &Database,
    m: usize,
    seed: u64,
) -> Result<LeakageTrace> {
    if m == 0 {
        return Err(Error::EmptyTrace);
    }
    let mut cum = Vec::with_capacity(qd.len());
    let mut acc = 0.0f64;
    for (q, w) in qd.iter() {
        if w.is_zero() {
            continue;
        }
        acc += rational_to_f64(w);
        cum.push((acc, q));
    }
    if cum.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut responses = Vec::with_capacity(m);
    for _ in 0..m {
        let u: f64 = rng.gen::<f64>() * total;
        let pos = cum.partition_point(|(c, _)| *c <= u).min(cum.len() - 1);
        responses.push(db.response(cum[pos].1)?);
    }
    Ok(LeakageTrace {
        responses,
        seed,
        samples: m,
    })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back for very large terms
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Brute-force enumeration of every database (over the same ids and domain)
/// whose response distribution equals that of `db` under `qd`. Always
/// contains `db` itself. Candidates are ordered injective assignments; the
/// count is guarded by `oracle_cap`.
pub fn ird_enumerate(
    qd: &QueryDistribution,
    db: &Database,
    oracle_cap: u128,
) -> Result<Vec<Database>> {
    let domain = *db.domain();
    if qd.domain() != &domain {
        return Err(Error::InvalidDomain {
            n: qd.domain().n,
            k: qd.domain().k,
        });
    }
    let n_records = db.len();
    let value_count = domain.value_count();
    let mut candidates = 1u128;
    for i in 0..n_records as u128 {
        candidates = candidates.saturating_mul(value_count.saturating_sub(i));
    }
    if candidates > oracle_cap {
        return Err(Error::CapExceeded {
            what: "ird oracle",
            needed: candidates,
            cap: oracle_cap,
        });
    }
    if n_records > 64 {
        return Err(Error::CapExceeded {
            what: "ird oracle records",
            needed: n_records as u128,
            cap: 64,
        });
    }

    let values: Vec<Value> = domain.values().collect();
    let ids: Vec<RecordId> = db.ids().cloned().collect();
    // Per query: scaled weight and the set of value indices it covers.
    let scale = {
        let mut s = BigInt::one();
        for w in qd.weights.values() {
            s = s.lcm(w.denom());
        }
        s
    };
    let mut covered: Vec<(BigInt, Vec<bool>)> = Vec::new();
    for (q, w) in qd.iter() {
        if w.is_zero() {
            continue;
        }
        let scaled = w.numer() * (&scale / w.denom());
        let mask: Vec<bool> = values
            .iter()
            .map(|v| crate::domain::covers(q, v).expect("same domain"))
            .collect();
        covered.push((scaled, mask));
    }

    let signature = |value_idx: &[usize]| -> HashMap<u64, BigInt> {
        let mut sig: HashMap<u64, BigInt> = HashMap::new();
        for (w, mask) in &covered {
            let mut bits = 0u64;
            for (pos, &vi) in value_idx.iter().enumerate() {
                if mask[vi] {
                    bits |= 1 << pos;
                }
            }
            *sig.entry(bits).or_insert_with(BigInt::zero) += w;
        }
        sig.retain(|_, v| !v.is_zero());
        sig
    };

    let base_idx: Vec<usize> = ids
        .iter()
        .map(|id| {
            values
                .iter()
                .position(|v| v == db.get(id).unwrap())
                .unwrap()
        })
        .collect();
    let base_sig = signature(&base_idx);

    let mut out = Vec::new();
    let mut assignment = Vec::with_capacity(n_records);
    let mut used = vec![false; values.len()];
    enumerate_assignments(
        &mut assignment,
        &mut used,
        n_records,
        values.len(),
        &mut |value_idx| {
            if signature(value_idx) == base_sig {
                let entries = ids
                    .iter()
                    .cloned()
                    .zip(value_idx.iter().map(|&vi| values[vi].clone()));
                out.push(Database::new(domain, entries).expect("distinct in-domain values"));
            }
        },
    );
    Ok(out)
}

fn enumerate_assignments(
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    n_records: usize,
    n_values: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if assignment.len() == n_records {
        visit(assignment);
        return;
    }
    for vi in 0..n_values {
        if used[vi] {
            continue;
        }
        used[vi] = true;
        assignment.push(vi);
        enumerate_assignments(assignment, used, n_records, n_values, visit);
        assignment.pop();
        used[vi] = false;
    }
}
