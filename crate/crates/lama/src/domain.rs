//! Plaintext-side geometry: values in `[N]^k`, axis-aligned range queries,
//! databases, and the coverage relation that drives everything else.
//!
//! A *value* is a point in the `k`-dimensional grid `[N]^k` (coordinates are
//! 1-based). A *query* is a hyperrectangle given by two corners, and it covers
//! a value when the value lies between the corners componentwise. A *database*
//! maps record identifiers to values, injectively: no two records share a
//! value.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Per-axis size `N` and number of dimensions `k` of the plaintext domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainSpec {
    pub n: u32,
    pub k: usize,
}

/// Default ceiling on the number of queries any enumeration is allowed to
/// touch. The universe grows as `(N(N+1)/2)^k`, so a guard keeps oversized
/// domains failing fast instead of thrashing.
pub const DEFAULT_QUERY_CAP: u128 = 10_000_000;

impl DomainSpec {
    pub fn new(n: u32, k: usize) -> Result<Self> {
        if n < 1 || k < 1 {
            return Err(Error::InvalidDomain { n, k });
        }
        Ok(DomainSpec { n, k })
    }

    /// Number of values in the domain, `N^k`.
    pub fn value_count(&self) -> u128 {
        (self.n as u128).pow(self.k as u32)
    }

    /// Number of queries in the universe, `(N(N+1)/2)^k`.
    pub fn query_count(&self) -> u128 {
        let per_axis = self.n as u128 * (self.n as u128 + 1) / 2;
        per_axis.pow(self.k as u32)
    }

    /// Largest L1 distance between two values, `k(N-1)`.
    pub fn max_distance(&self) -> u32 {
        self.k as u32 * (self.n - 1)
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.check(v).is_ok()
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if v.coords.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: v.coords.len(),
            });
        }
        for (dim, &c) in v.coords.iter().enumerate() {
            if c < 1 || c > self.n {
                return Err(Error::OutOfDomain {
                    coord: c,
                    n: self.n,
                    dim,
                });
            }
        }
        Ok(())
    }

    /// All values in lexicographic order.
    pub fn values(&self) -> impl Iterator<Item = Value> + '_ {
        let mut cur: Option<Vec<u32>> = Some(vec![1; self.k]);
        let n = self.n;
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            // advance odometer, last coordinate fastest
            let c = cur.as_mut().unwrap();
            let mut i = c.len();
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if c[i] < n {
                    c[i] += 1;
                    for x in c[i + 1..].iter_mut() {
                        *x = 1;
                    }
                    break;
                }
            }
            Some(Value { coords: out })
        })
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.n, self.k)
    }
}

/// A point in `[N]^k`. Coordinates are stored as a fixed-length vector even
/// for `k = 1` so every code path is the same.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Value {
    coords: Vec<u32>,
}

impl Value {
    pub fn new(coords: Vec<u32>) -> Self {
        Value { coords }
    }

    /// Validates the point against a domain.
    pub fn checked(coords: Vec<u32>, domain: &DomainSpec) -> Result<Self> {
        let v = Value { coords };
        domain.check(&v)?;
        Ok(v)
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Mirror image on the given axes: coordinate `v` becomes `N + 1 - v`.
    pub fn reflect(&self, domain: &DomainSpec, axes: &BTreeSet<usize>) -> Value {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if axes.contains(&i) {
                    domain.n + 1 - c
                } else {
                    c
                }
            })
            .collect();
        Value { coords }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_same_dim(a: &Value, b: &Value) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// `true` iff `a_i <= b_i` on every dimension (`b` dominates `a`).
pub fn dominates(a: &Value, b: &Value) -> Result<bool> {
    check_same_dim(a, b)?;
    Ok(a.coords.iter().zip(&b.coords).all(|(x, y)| x <= y))
}

/// L1 (Manhattan) distance between two values.
pub fn l1_dist(a: &Value, b: &Value) -> Result<u32> {
    check_same_dim(a, b)?;
    Ok(a.coords
        .iter()
        .zip(&b.coords)
        .map(|(&x, &y)| x.abs_diff(y))
        .sum())
}

/// An axis-aligned hyperrectangle `[low, high]` with `low` dominated by
/// `high`. The size of a query is the L1 distance between its corners.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QueryRect {
    low: Value,
    high: Value,
}

impl QueryRect {
    pub fn new(low: Value, high: Value) -> Result<Self> {
        if !dominates(&low, &high)? {
            return Err(Error::InvalidQuery(format!("[{low},{high}]")));
        }
        Ok(QueryRect { low, high })
    }

    pub fn point(v: Value) -> Self {
        QueryRect {
            low: v.clone(),
            high: v,
        }
    }

    pub fn low(&self) -> &Value {
        &self.low
    }

    pub fn high(&self) -> &Value {
        &self.high
    }

    /// Corner L1 distance. A size-`d` query covers no pair of values at
    /// distance greater than `d`.
    pub fn size(&self) -> u32 {
        l1_dist(&self.low, &self.high).expect("corners share a dimension")
    }

    /// `true` iff this rectangle is contained in `other`.
    pub fn within(&self, other: &QueryRect) -> Result<bool> {
        Ok(dominates(&other.low, &self.low)? && dominates(&self.high, &other.high)?)
    }
}

impl fmt::Display for QueryRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.low, self.high)
    }
}

/// `true` iff `q.low <= v <= q.high` componentwise.
pub fn covers(q: &QueryRect, v: &Value) -> Result<bool> {
    Ok(dominates(&q.low, v)? && dominates(v, &q.high)?)
}

/// Minimum bounding query of a nonempty value set: componentwise min for the
/// low corner, componentwise max for the high corner. A query covers every
/// value of the set iff it covers both corners of the result.
pub fn mbq<'a, I>(values: I) -> Result<QueryRect>
where
    I: IntoIterator<Item = &'a Value>,
{
    let mut it = values.into_iter();
    let first = it.next().ok_or(Error::EmptyValueSet)?;
    let mut low = first.coords.clone();
    let mut high = first.coords.clone();
    for v in it {
        if v.dim() != low.len() {
            return Err(Error::DimensionMismatch {
                expected: low.len(),
                got: v.dim(),
            });
        }
        for (i, &c) in v.coords.iter().enumerate() {
            low[i] = low[i].min(c);
            high[i] = high[i].max(c);
        }
    }
    Ok(QueryRect {
        low: Value::new(low),
        high: Value::new(high),
    })
}

/// Enumerates the query universe in lexicographic order on `(low, high)`,
/// guarded by `cap` (see [`DEFAULT_QUERY_CAP`]).
pub fn query_universe(domain: &DomainSpec, cap: u128) -> Result<Vec<QueryRect>> {
    let count = domain.query_count();
    if count > cap {
        return Err(Error::CapExceeded {
            what: "query universe",
            needed: count,
            cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    for low in domain.values() {
        // highs dominated-from: iterate the sub-grid [low_i, N] per axis in lex order
        let mut cur: Option<Vec<u32>> = Some(low.coords.clone());
        while let Some(high) = cur.clone() {
            out.push(QueryRect {
                low: low.clone(),
                high: Value::new(high.clone()),
            });
            let c = cur.as_mut().unwrap();
            let mut i = c.len();
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if c[i] < domain.n {
                    c[i] += 1;
                    for (j, x) in c[i + 1..].iter_mut().enumerate() {
                        *x = low.coords[i + 1 + j];
                    }
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// A record identifier. Opaque; ordering is lexicographic so iteration is
/// reproducible.
pub type RecordId = String;

/// An injective map from record identifiers to in-domain values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Database {
    domain: DomainSpec,
    entries: BTreeMap<RecordId, Value>,
}

impl Database {
    pub fn new(
        domain: DomainSpec,
        entries: impl IntoIterator<Item = (RecordId, Value)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen: BTreeMap<Value, RecordId> = BTreeMap::new();
        for (id, v) in entries {
            domain.check(&v)?;
            if let Some(prev) = seen.get(&v) {
                return Err(Error::DuplicateValue {
                    a: prev.clone(),
                    b: id,
                });
            }
            seen.insert(v.clone(), id.clone());
            if map.insert(id.clone(), v).is_some() {
                return Err(Error::DuplicateRecord(id));
            }
        }
        Ok(Database {
            domain,
            entries: map,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Value> {
        self.entries.get(id)
    }

    pub fn value_of(&self, id: &str) -> Result<&Value> {
        self.entries
            .get(id)
            .ok_or_else(|| Error::UnknownRecord(id.to_string()))
    }

    /// Record ids in lexicographic order.
    pub fn ids(&self) -> impl Iterator<Item = &RecordId> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RecordId, &Value)> {
        self.entries.iter()
    }

    /// Ids whose values the query covers. No false positives: exactly the
    /// covered records.
    pub fn response(&self, q: &QueryRect) -> Result<BTreeSet<RecordId>> {
        let mut out = BTreeSet::new();
        for (id, v) in &self.entries {
            if covers(q, v)? {
                out.insert(id.clone());
            }
        }
        Ok(out)
    }

    /// Mirrors the database on the chosen axes (0-based). Applying the same
    /// reflection twice gives back the original database.
    pub fn reflect(&self, axes: &BTreeSet<usize>) -> Database {
        let entries = self
            .entries
            .iter()
            .map(|(id, v)| (id.clone(), v.reflect(&self.domain, axes)))
            .collect();
        Database {
            domain: self.domain,
            entries,
        }
    }
}

/// Witness set for coverage reduction: for each dimension, the values of `V`
/// that are minimal and maximal on that dimension (ties broken by the
/// lexicographically smallest value). At most `2k` values; any query covering
/// all witnesses covers all of `V`.
pub fn min_max_witnesses(values: &BTreeSet<Value>) -> Result<BTreeSet<Value>> {
    let first = values.iter().next().ok_or(Error::EmptyValueSet)?;
    let k = first.dim();
    let mut out = BTreeSet::new();
    for dim in 0..k {
        // BTreeSet iterates in lex order, so the first hit is the tie-break winner.
        let min = values
            .iter()
            .min_by_key(|v| (v.coords()[dim], (*v).clone()))
            .unwrap();
        let max = values
            .iter()
            .min_by_key(|v| (std::cmp::Reverse(v.coords()[dim]), (*v).clone()))
            .unwrap();
        out.insert(min.clone());
        out.insert(max.clone());
    }
    Ok(out)
}
