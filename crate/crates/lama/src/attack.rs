//! The matching attack: selector, translator, solver.
//!
//! The attacker knows the query distribution and observes which record sets
//! come back together (the access pattern). A *selector* chooses which
//! record-subset retrieval events to test. The *translator* finds, for each
//! selected subset, every tuple of values whose probability of simultaneous
//! coverage equals the observed retrieval frequency, and folds the findings
//! into one logical formula over `record = value` assignments. The *solver*
//! enumerates every injective assignment satisfying the formula; one of them
//! is always the true database.
//!
//! With the full intersection selector (all record subsets up to size `2k`)
//! and exact limit frequencies, the solutions are precisely the databases
//! with the same response distribution as the true one: frequency analysis
//! cannot narrow further, and no smaller generic selector achieves this (see
//! [`crate::counterexample`] for the tightness construction).

use crate::domain::{Database, DomainSpec, RecordId, Value, DEFAULT_QUERY_CAP};
use crate::error::{Error, Result};
use crate::prob::{CoverTable, LeakageTrace, QueryDistribution};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::Instant;

/// Default ceiling on materialized solutions.
pub const DEFAULT_MATERIALIZE_CAP: usize = 10_000;
/// Default ceiling on exact solution counts; beyond it the solver reports
/// overflow instead of a number.
pub const DEFAULT_COUNT_BOUND: u128 = 1_000_000_000;

/// An intersection expression over records: "all of these ids appear in the
/// response". Ids are kept sorted so expressions and value tuples align.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeftExpr {
    ids: Vec<RecordId>,
}

impl LeftExpr {
    pub fn new(ids: impl IntoIterator<Item = RecordId>) -> Result<Self> {
        let set: BTreeSet<RecordId> = ids.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyValueSet);
        }
        Ok(LeftExpr {
            ids: set.into_iter().collect(),
        })
    }

    pub fn ids(&self) -> &[RecordId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

impl fmt::Display for LeftExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.ids.join(","))
    }
}

/// Which family of left-hand expressions the selector emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectorKind {
    /// Every record subset of size 1 through `min(2k, n)`. Exhausts the
    /// information frequency analysis can extract.
    Full,
    /// As [`SelectorKind::Full`] but without the size-`2k` expressions.
    /// Provably weaker; used to demonstrate the bound is tight.
    Trimmed,
    /// Singletons plus the pairs through the minimum-frequency record: the
    /// classic anchor-point attack for one-dimensional uniform queries,
    /// linear in the number of records.
    Anchored,
}

impl SelectorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelectorKind::Full => "full",
            SelectorKind::Trimmed => "trimmed",
            SelectorKind::Anchored => "anchored",
        }
    }
}

impl std::str::FromStr for SelectorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SelectorKind::Full),
            "trimmed" => Ok(SelectorKind::Trimmed),
            "anchored" => Ok(SelectorKind::Anchored),
            other => Err(Error::Config(format!("unknown selector `{other}`"))),
        }
    }
}

/// All record subsets of size 1 through `min(2k, n)`, sizes ascending,
/// lexicographic within a size.
pub fn selector_full(ids: &BTreeSet<RecordId>, k: usize) -> Vec<LeftExpr> {
    subsets_up_to(ids, (2 * k).min(ids.len()))
}

/// All record subsets of size 1 through `min(2k - 1, n)`.
pub fn selector_trimmed(ids: &BTreeSet<RecordId>, k: usize) -> Vec<LeftExpr> {
    subsets_up_to(ids, (2 * k - 1).min(ids.len()))
}

fn subsets_up_to(ids: &BTreeSet<RecordId>, max_size: usize) -> Vec<LeftExpr> {
    let sorted: Vec<&RecordId> = ids.iter().collect();
    let mut out = Vec::new();
    for size in 1..=max_size {
        for combo in sorted.iter().combinations(size) {
            out.push(LeftExpr {
                ids: combo.into_iter().map(|id| (*id).clone()).collect(),
            });
        }
    }
    out
}

/// Singletons first, then `{anchor, id}` for every other id, where the
/// anchor is the record with the smallest frequency (ties broken by the
/// lexicographically smallest id). Output size is `2n - 1`.
pub fn selector_anchored(
    ids: &BTreeSet<RecordId>,
    freqs: &BTreeMap<RecordId, BigRational>,
) -> Result<Vec<LeftExpr>> {
    if ids.is_empty() {
        return Err(Error::EmptyValueSet);
    }
    let mut anchor: Option<&RecordId> = None;
    for id in ids {
        let f = freqs
            .get(id)
            .ok_or_else(|| Error::UnknownRecord(id.clone()))?;
        anchor = match anchor {
            None => Some(id),
            Some(best) if f < &freqs[best] => Some(id),
            keep => keep,
        };
    }
    let anchor = anchor.unwrap().clone();
    let mut out: Vec<LeftExpr> = ids
        .iter()
        .map(|id| LeftExpr {
            ids: vec![id.clone()],
        })
        .collect();
    for id in ids {
        if *id != anchor {
            let mut pair = vec![anchor.clone(), id.clone()];
            pair.sort();
            out.push(LeftExpr { ids: pair });
        }
    }
    Ok(out)
}

/// Where observed frequencies come from: limit-mode exact rationals computed
/// against the true database, or empirical counts from a finite trace with a
/// matching tolerance.
pub enum FrequencySource<'a> {
    Exact {
        db: &'a Database,
    },
    Empirical {
        trace: &'a LeakageTrace,
        epsilon: BigRational,
    },
}

impl<'a> FrequencySource<'a> {
    /// Record ids visible to the attacker: the database's ids in exact mode,
    /// the union of observed responses in empirical mode.
    pub fn record_ids(&self) -> BTreeSet<RecordId> {
        match self {
            FrequencySource::Exact { db } => db.ids().cloned().collect(),
            FrequencySource::Empirical { trace, .. } => trace
                .responses
                .iter()
                .flat_map(|r| r.iter().cloned())
                .collect(),
        }
    }

    /// Observed frequency of an expression, as an exact rational (containment
    /// count over trace length in empirical mode).
    pub fn frequency(&self, table: &CoverTable, expr: &LeftExpr) -> Result<BigRational> {
        match self {
            FrequencySource::Exact { db } => table.retrieval_freq(db, expr.ids()),
            FrequencySource::Empirical { trace, .. } => {
                if trace.responses.is_empty() {
                    return Err(Error::EmptyTrace);
                }
                let ids: BTreeSet<RecordId> = expr.ids().iter().cloned().collect();
                let count = trace.containment_count(&ids);
                Ok(BigRational::new(
                    BigInt::from(count),
                    BigInt::from(trace.responses.len()),
                ))
            }
        }
    }

    /// Match predicate: exact equality in limit mode, `|f - p| <= epsilon`
    /// in empirical mode.
    pub fn matches(&self, observed: &BigRational, prob: &BigRational) -> bool {
        match self {
            FrequencySource::Exact { .. } => observed == prob,
            FrequencySource::Empirical { epsilon, .. } => (observed - prob).abs() <= *epsilon,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, FrequencySource::Exact { .. })
    }
}

/// A frequency-probability match: the records of `left` are retrieved
/// together exactly as often as the values of `right` are covered together.
/// `right` aligns with the sorted ids of `left`; values are pairwise
/// distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPair {
    pub left: LeftExpr,
    pub right: Vec<Value>,
}

/// Per-record candidate values and, per already-tested record tuple, the
/// value tuples not yet ruled out. Candidate sets only shrink as rounds
/// proceed.
#[derive(Debug, Clone)]
pub struct CandidateTable {
    per_id: BTreeMap<RecordId, BTreeSet<Value>>,
    tuples: BTreeMap<Vec<RecordId>, HashSet<Vec<Value>>>,
}

impl CandidateTable {
    /// Fresh table: every record may still be any domain value.
    pub fn new(ids: &BTreeSet<RecordId>, domain: &DomainSpec) -> Self {
        let all: BTreeSet<Value> = domain.values().collect();
        CandidateTable {
            per_id: ids.iter().map(|id| (id.clone(), all.clone())).collect(),
            tuples: BTreeMap::new(),
        }
    }

    pub fn candidates(&self, id: &str) -> Option<&BTreeSet<Value>> {
        self.per_id.get(id)
    }

    /// Folds a finished match group in: remembers the allowed tuples and
    /// intersects each member's candidate set with its projection.
    pub fn record_group(&mut self, left: &LeftExpr, matches: &[MatchingPair]) {
        let allowed: HashSet<Vec<Value>> = matches.iter().map(|m| m.right.clone()).collect();
        for (pos, id) in left.ids().iter().enumerate() {
            let projection: BTreeSet<Value> = allowed.iter().map(|t| t[pos].clone()).collect();
            if let Some(set) = self.per_id.get_mut(id) {
                set.retain(|v| projection.contains(v));
            }
        }
        self.tuples.insert(left.ids().to_vec(), allowed);
    }

    /// Stored groups over strict subsets of `ids`, as (positions within
    /// `ids`, allowed sub-tuples).
    fn subgroups_of<'s>(&'s self, ids: &[RecordId]) -> Vec<(Vec<usize>, &'s HashSet<Vec<Value>>)> {
        let mut out = Vec::new();
        for (key, allowed) in &self.tuples {
            if key.len() >= ids.len() {
                continue;
            }
            let positions: Option<Vec<usize>> = key
                .iter()
                .map(|id| ids.iter().position(|x| x == id))
                .collect();
            if let Some(positions) = positions {
                out.push((positions, allowed));
            }
        }
        out
    }
}

/// Finds every value tuple matching the observed frequency of `left`.
///
/// With `prune` set, the search runs over the per-record candidate sets that
/// survived earlier rounds, and a tuple whose sub-tuple was already ruled out
/// by a smaller test is skipped without a frequency test (it cannot extend to
/// a valid reconstruction). Without `prune`, the whole domain is searched per
/// record. Only pairwise-distinct tuples are considered; output order is
/// deterministic. An empty result is legal and, in exact mode, only arises
/// for expressions over records absent from the frequency source.
pub fn find_matches(
    table: &CoverTable,
    source: &FrequencySource<'_>,
    left: &LeftExpr,
    candidates: &CandidateTable,
    prune: bool,
) -> Result<Vec<MatchingPair>> {
    let target = source.frequency(table, left)?;
    let domain = *table.domain();
    let all: BTreeSet<Value> = domain.values().collect();
    let pools: Vec<&BTreeSet<Value>> = left
        .ids()
        .iter()
        .map(|id| {
            if prune {
                candidates.candidates(id).unwrap_or(&all)
            } else {
                &all
            }
        })
        .collect();
    let subgroups = if prune {
        candidates.subgroups_of(left.ids())
    } else {
        Vec::new()
    };

    let mut out = Vec::new();
    let mut tuple: Vec<Value> = Vec::with_capacity(left.len());
    search_tuples(&pools, &subgroups, &mut tuple, &mut |t| {
        let prob = table.cover_prob(t.iter())?;
        if source.matches(&target, &prob) {
            out.push(MatchingPair {
                left: left.clone(),
                right: t.to_vec(),
            });
        }
        Ok(())
    })?;
    Ok(out)
}

fn search_tuples(
    pools: &[&BTreeSet<Value>],
    subgroups: &[(Vec<usize>, &HashSet<Vec<Value>>)],
    tuple: &mut Vec<Value>,
    visit: &mut impl FnMut(&[Value]) -> Result<()>,
) -> Result<()> {
    if tuple.len() == pools.len() {
        return visit(tuple);
    }
    let pos = tuple.len();
    'next: for v in pools[pos] {
        if tuple.contains(v) {
            continue;
        }
        tuple.push(v.clone());
        for (positions, allowed) in subgroups {
            // check a stored subgroup once its last member gets assigned
            if positions.iter().max() == Some(&pos) {
                let sub: Vec<Value> = positions.iter().map(|&p| tuple[p].clone()).collect();
                if !allowed.contains(&sub) {
                    tuple.pop();
                    continue 'next;
                }
            }
        }
        search_tuples(pools, subgroups, tuple, visit)?;
        tuple.pop();
    }
    Ok(())
}

/// One OR-group of a [`MatchFormula`]: the records of `ids` must jointly take
/// one of the listed value tuples (each tuple a conjunction of `id = value`
/// literals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaGroup {
    pub ids: Vec<RecordId>,
    pub disjuncts: Vec<Vec<Value>>,
}

/// AND over groups, OR within a group, AND over the literals of a disjunct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchFormula {
    pub groups: Vec<FormulaGroup>,
}

/// Joins per-expression match lists into one formula: assignments from one
/// matching pair are bound by AND, alternative pairs for the same expression
/// by OR, and distinct expressions by AND. Groups are ordered by (size, ids)
/// and disjuncts sorted and deduplicated, so serialization is deterministic.
pub fn build_formula(groups: &[(LeftExpr, Vec<MatchingPair>)]) -> MatchFormula {
    let mut out: Vec<FormulaGroup> = groups
        .iter()
        .map(|(left, matches)| {
            let mut disjuncts: Vec<Vec<Value>> = matches.iter().map(|m| m.right.clone()).collect();
            disjuncts.sort();
            disjuncts.dedup();
            FormulaGroup {
                ids: left.ids().to_vec(),
                disjuncts,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.ids.len(), &a.ids).cmp(&(b.ids.len(), &b.ids)));
    MatchFormula { groups: out }
}

impl fmt::Display for MatchFormula {
    /// Deterministic text form: `AND { OR { AND { id=val, ... }, ... }, ... }`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AND {{")?;
        for (gi, g) in self.groups.iter().enumerate() {
            if gi > 0 {
                write!(f, ",")?;
            }
            write!(f, " OR {{")?;
            for (di, d) in g.disjuncts.iter().enumerate() {
                if di > 0 {
                    write!(f, ",")?;
                }
                write!(f, " AND {{ ")?;
                for (li, (id, v)) in g.ids.iter().zip(d).enumerate() {
                    if li > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{id}={v}")?;
                }
                write!(f, " }}")?;
            }
            write!(f, " }}")?;
        }
        write!(f, " }}")
    }
}

/// One injective record-to-value assignment, aligned with a sorted id list.
pub type Reconstruction = Vec<Value>;

/// Exact number of satisfying assignments, or an overflow marker when the
/// count passed the configured bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionCount {
    Exact(u128),
    Overflow { bound: u128 },
}

impl SolutionCount {
    pub fn exact(&self) -> Option<u128> {
        match self {
            SolutionCount::Exact(n) => Some(*n),
            SolutionCount::Overflow { .. } => None,
        }
    }
}

impl fmt::Display for SolutionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionCount::Exact(n) => write!(f, "{n}"),
            SolutionCount::Overflow { bound } => write!(f, ">{bound}"),
        }
    }
}

/// All injective assignments satisfying a formula. `solutions` materializes
/// at most the configured cap, in deterministic order; `count` is exact
/// unless marked overflowed.
#[derive(Debug, Clone)]
pub struct ReconstructionSet {
    pub ids: Vec<RecordId>,
    pub solutions: Vec<Reconstruction>,
    pub count: SolutionCount,
}

impl ReconstructionSet {
    pub fn contains_assignment(&self, assignment: &[Value]) -> bool {
        self.solutions.iter().any(|s| s.as_slice() == assignment)
    }

    pub fn contains_database(&self, db: &Database) -> bool {
        let tuple: Option<Vec<Value>> = self.ids.iter().map(|id| db.get(id).cloned()).collect();
        match tuple {
            Some(t) => self.contains_assignment(&t),
            None => false,
        }
    }

    /// Materialized solutions as databases.
    pub fn databases(&self, domain: DomainSpec) -> Result<Vec<Database>> {
        self.solutions
            .iter()
            .map(|sol| Database::new(domain, self.ids.iter().cloned().zip(sol.iter().cloned())))
            .collect()
    }
}

/// Enumerates every injective assignment of domain values to `ids` that
/// satisfies the formula.
///
/// Backtracks over per-record candidate domains induced by the formula, in
/// lexicographic order. Records constrained by no group are factored out:
/// their choices contribute a falling-factorial multiplier to the count and
/// are expanded lazily into at most `materialize_cap` full assignments. The
/// count is exact whenever it stays within `count_bound`; otherwise the
/// result carries an overflow marker. A formula with no groups is satisfied
/// by every injective assignment.
pub fn solve_all(
    formula: &MatchFormula,
    domain: &DomainSpec,
    ids: &BTreeSet<RecordId>,
    materialize_cap: usize,
    count_bound: u128,
) -> Result<ReconstructionSet> {
    for g in &formula.groups {
        for id in &g.ids {
            if !ids.contains(id) {
                return Err(Error::UnknownRecord(id.clone()));
            }
        }
        for d in &g.disjuncts {
            for v in d {
                if !domain.contains(v) {
                    return Err(Error::OutOfDomain {
                        coord: 0,
                        n: domain.n,
                        dim: domain.k,
                    });
                }
            }
        }
    }

    let sorted_ids: Vec<RecordId> = ids.iter().cloned().collect();
    let all_values: Vec<Value> = domain.values().collect();
    let value_count = all_values.len();

    // a single-record group listing the whole domain constrains nothing
    let live_groups: Vec<&FormulaGroup> = formula
        .groups
        .iter()
        .filter(|g| {
            !(g.ids.len() == 1
                && g.disjuncts
                    .iter()
                    .map(|d| &d[0])
                    .collect::<BTreeSet<_>>()
                    .len()
                    == value_count)
        })
        .collect();

    // per-record candidates induced by the live groups
    let mut per_id: BTreeMap<RecordId, BTreeSet<Value>> = BTreeMap::new();
    for g in &live_groups {
        for (pos, id) in g.ids.iter().enumerate() {
            let projection: BTreeSet<Value> = g.disjuncts.iter().map(|d| d[pos].clone()).collect();
            per_id
                .entry(id.clone())
                .and_modify(|s| s.retain(|v| projection.contains(v)))
                .or_insert(projection);
        }
    }

    let constrained: Vec<RecordId> = sorted_ids
        .iter()
        .filter(|id| per_id.contains_key(*id))
        .cloned()
        .collect();
    let free: Vec<RecordId> = sorted_ids
        .iter()
        .filter(|id| !per_id.contains_key(*id))
        .cloned()
        .collect();
    if sorted_ids.len() > value_count {
        return Ok(ReconstructionSet {
            ids: sorted_ids,
            solutions: Vec::new(),
            count: SolutionCount::Exact(0),
        });
    }

    let group_positions: Vec<(Vec<usize>, &FormulaGroup)> = live_groups
        .iter()
        .map(|g| {
            let positions: Vec<usize> = g
                .ids
                .iter()
                .map(|id| {
                    constrained
                        .iter()
                        .position(|x| x == id)
                        .expect("constrained id")
                })
                .collect();
            (positions, *g)
        })
        .collect();

    let pools: Vec<BTreeSet<Value>> = constrained.iter().map(|id| per_id[id].clone()).collect();

    // multiplier from free records: (V - c)(V - c - 1)...
    let remaining = value_count - constrained.len();
    let mut free_mult: u128 = 1;
    let mut mult_overflow = false;
    for i in 0..free.len() {
        match free_mult.checked_mul((remaining - i) as u128) {
            Some(m) => free_mult = m,
            None => {
                mult_overflow = true;
                break;
            }
        }
    }

    let mut core_solutions: Vec<Vec<Value>> = Vec::new();
    let mut count: u128 = 0;
    let mut assignment: Vec<Value> = Vec::with_capacity(constrained.len());
    let completed = solve_rec(&pools, &group_positions, &mut assignment, &mut |core| {
        count = count.saturating_add(free_mult);
        if core_solutions.len() < materialize_cap.max(1) {
            core_solutions.push(core.to_vec());
        }
        !mult_overflow && count <= count_bound
    });

    let count = if completed && !mult_overflow && count <= count_bound {
        SolutionCount::Exact(count)
    } else {
        SolutionCount::Overflow { bound: count_bound }
    };

    // expand free records over unused values, lexicographically, up to cap
    let mut solutions: Vec<Reconstruction> = Vec::new();
    'cores: for core in &core_solutions {
        let used: BTreeSet<&Value> = core.iter().collect();
        let avail: Vec<&Value> = all_values.iter().filter(|v| !used.contains(v)).collect();
        let mut picks: Vec<usize> = Vec::new();
        let mut used_idx = vec![false; avail.len()];
        let full = expand_free(
            &avail,
            free.len(),
            &mut picks,
            &mut used_idx,
            &mut |picks| {
                let mut by_id: BTreeMap<&RecordId, &Value> = BTreeMap::new();
                for (pos, id) in constrained.iter().enumerate() {
                    by_id.insert(id, &core[pos]);
                }
                for (pos, id) in free.iter().enumerate() {
                    by_id.insert(id, avail[picks[pos]]);
                }
                solutions.push(sorted_ids.iter().map(|id| by_id[id].clone()).collect());
                solutions.len() < materialize_cap
            },
        );
        if !full {
            break 'cores;
        }
    }

    Ok(ReconstructionSet {
        ids: sorted_ids,
        solutions,
        count,
    })
}

/// Returns false if the visitor asked to stop.
fn solve_rec(
    pools: &[BTreeSet<Value>],
    groups: &[(Vec<usize>, &FormulaGroup)],
    assignment: &mut Vec<Value>,
    emit: &mut impl FnMut(&[Value]) -> bool,
) -> bool {
    if assignment.len() == pools.len() {
        return emit(assignment);
    }
    let pos = assignment.len();
    'next: for v in &pools[pos] {
        if assignment.contains(v) {
            continue;
        }
        assignment.push(v.clone());
        for (positions, g) in groups {
            if positions.iter().max() == Some(&pos) {
                let satisfied = g
                    .disjuncts
                    .iter()
                    .any(|d| positions.iter().zip(d).all(|(&p, dv)| &assignment[p] == dv));
                if !satisfied {
                    assignment.pop();
                    continue 'next;
                }
            }
        }
        if !solve_rec(pools, groups, assignment, emit) {
            return false;
        }
        assignment.pop();
    }
    true
}

/// Returns false if the visitor asked to stop.
fn expand_free(
    avail: &[&Value],
    depth: usize,
    picks: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if picks.len() == depth {
        return emit(picks);
    }
    for i in 0..avail.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        picks.push(i);
        if !expand_free(avail, depth, picks, used, emit) {
            return false;
        }
        picks.pop();
        used[i] = false;
    }
    true
}

/// Attack knobs; `Default` matches the documented defaults.
#[derive(Debug, Clone)]
pub struct AttackConfig {
    pub query_cap: u128,
    /// Candidate pruning and the mini-solver pass over prior rounds.
    /// Disabling only affects cost: final reconstruction sets are identical.
    pub prune: bool,
    pub materialize_cap: usize,
    pub count_bound: u128,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            query_cap: DEFAULT_QUERY_CAP,
            prune: true,
            materialize_cap: DEFAULT_MATERIALIZE_CAP,
            count_bound: DEFAULT_COUNT_BOUND,
        }
    }
}

/// Per-round record of an attack run.
#[derive(Debug, Clone)]
pub struct TRound {
    pub t: usize,
    /// Matching pairs found across all size-t expressions.
    pub matches: u128,
    /// Satisfying reconstructions after this round's constraints.
    pub reconstructions: SolutionCount,
    pub elapsed_ms: u128,
}

/// Outcome of a full attack run: per-round match and reconstruction counts,
/// the final formula, and the final reconstruction set.
#[derive(Debug, Clone)]
pub struct AttackReport {
    pub selector: SelectorKind,
    pub exact_mode: bool,
    pub rounds: Vec<TRound>,
    pub formula: MatchFormula,
    pub final_set: ReconstructionSet,
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
}

/// Runs the full pipeline: for `t = 1..=t_max` (clamped to the selector's
/// largest expression), finds all matches for every size-`t` expression,
/// refines the candidate table, rebuilds the formula, and re-solves. In
/// exact mode with [`SelectorKind::Full`] and `t_max = 2k`, the final set
/// equals the identical-response-distribution class of the true database.
///
/// In empirical mode an expression with no match within tolerance is dropped
/// with a warning rather than poisoning the formula; finite samples may miss.
pub fn run_attack(
    qd: &QueryDistribution,
    source: &FrequencySource<'_>,
    selector: SelectorKind,
    t_max: usize,
    config: &AttackConfig,
) -> Result<AttackReport> {
    let start = Instant::now();
    let domain = *qd.domain();
    let ids = source.record_ids();
    if ids.is_empty() {
        return Err(Error::EmptyValueSet);
    }
    let table = qd.cover_table(config.query_cap)?;

    let exprs: Vec<LeftExpr> = match selector {
        SelectorKind::Full => selector_full(&ids, domain.k),
        SelectorKind::Trimmed => selector_trimmed(&ids, domain.k),
        SelectorKind::Anchored => {
            let mut freqs = BTreeMap::new();
            for id in &ids {
                let singleton = LeftExpr {
                    ids: vec![id.clone()],
                };
                freqs.insert(id.clone(), source.frequency(&table, &singleton)?);
            }
            selector_anchored(&ids, &freqs)?
        }
    };
    let natural_max = exprs.iter().map(LeftExpr::len).max().unwrap_or(1);
    let t_cap = t_max.min(natural_max).max(1);

    let mut candidates = CandidateTable::new(&ids, &domain);
    let mut groups: Vec<(LeftExpr, Vec<MatchingPair>)> = Vec::new();
    let mut warnings = Vec::new();
    let mut rounds = Vec::new();
    let mut formula = MatchFormula::default();
    let mut final_set = solve_all(
        &formula,
        &domain,
        &ids,
        config.materialize_cap,
        config.count_bound,
    )?;

    for t in 1..=t_cap {
        let round_start = Instant::now();
        let mut round_matches: u128 = 0;
        for left in exprs.iter().filter(|e| e.len() == t) {
            let matches = find_matches(&table, source, left, &candidates, config.prune)?;
            round_matches += matches.len() as u128;
            if matches.is_empty() && !source.is_exact() {
                warnings.push(format!(
                    "no match within tolerance for {left}; dropping the expression"
                ));
                continue;
            }
            if config.prune {
                candidates.record_group(left, &matches);
            }
            groups.push((left.clone(), matches));
        }
        formula = build_formula(&groups);
        final_set = solve_all(
            &formula,
            &domain,
            &ids,
            config.materialize_cap,
            config.count_bound,
        )?;
        rounds.push(TRound {
            t,
            matches: round_matches,
            reconstructions: final_set.count,
            elapsed_ms: round_start.elapsed().as_millis(),
        });
    }

    Ok(AttackReport {
        selector,
        exact_mode: source.is_exact(),
        rounds,
        formula,
        final_set,
        warnings,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
