//! Frequency analysis for range-query leakage, end to end: exact retrieval
//! probabilities, the matching attack that reconstructs plaintext databases
//! from access-pattern leakage plus a known query distribution, the
//! query-distribution flattening defenses, a tightness counterexample
//! generator, and an experiment harness.
//!
//! The crate is organized around the attack pipeline:
//!
//! - [`domain`]: values in `[N]^k`, range queries, databases, coverage.
//! - [`prob`]: exact-rational cover probabilities, response distributions,
//!   leakage simulation, and the brute-force identical-response-distribution
//!   oracle.
//! - [`attack`]: selectors over record subsets, frequency matching,
//!   constraint formulas, and all-solutions enumeration.
//! - [`flatten`]: defenses that rewrite a query distribution so singleton
//!   (and equidistant-pair) retrieval probabilities carry no information,
//!   plus the witness showing cross-distance flattening is impossible.
//! - [`counterexample`]: instances where dropping the largest matching
//!   tests provably loses reconstruction accuracy.
//! - [`eval`]: dataset ingestion, distribution factory, experiment runner,
//!   and report emission.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability, and the `lama` binary for the same surface as subcommands.

pub mod attack;
pub mod counterexample;
pub mod domain;
pub mod error;
pub mod eval;
pub mod flatten;
pub mod prob;

pub use attack::{
    build_formula, find_matches, run_attack, selector_anchored, selector_full, selector_trimmed,
    solve_all, AttackConfig, AttackReport, CandidateTable, FormulaGroup, FrequencySource, LeftExpr,
    MatchFormula, MatchingPair, Reconstruction, ReconstructionSet, SelectorKind, SolutionCount,
    TRound,
};
pub use counterexample::{build_instance, verify_instance, TightnessInstance, VerificationRecord};
pub use domain::{
    covers, dominates, l1_dist, mbq, query_universe, Database, DomainSpec, QueryRect, RecordId,
    Value, DEFAULT_QUERY_CAP,
};
pub use error::{Error, Result};
pub use eval::{
    emit_report, ingest_dataset, make_distribution, read_database, run_experiment, write_database,
    DimensionConfig, Discretization, DistributionKind, ExperimentConfig, ExperimentReport,
    ModeConfig,
};
pub use flatten::{audit_flatness, flatten_equidistant, flatten_singletons, impossibility_witness};
pub use prob::{
    ird_enumerate, sample_leakage, CoverTable, LeakageTrace, QueryDistribution,
    ResponseDistribution, DEFAULT_ORACLE_CAP,
};
