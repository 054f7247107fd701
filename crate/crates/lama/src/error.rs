use crate::domain::QueryRect;
use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {coord} out of domain [1, {n}] on dimension {dim}")]
    OutOfDomain { coord: u32, n: u32, dim: usize },

    #[error("empty value set")]
    EmptyValueSet,

    #[error("query low corner must be dominated by high corner: {0}")]
    InvalidQuery(String),

    #[error("invalid domain: N={n}, k={k}")]
    InvalidDomain { n: u32, k: usize },

    #[error("{what} requires {needed} candidates but the cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("unknown record id `{0}`")]
    UnknownRecord(String),

    #[error("duplicate value for records `{a}` and `{b}`")]
    DuplicateValue { a: String, b: String },

    #[error("duplicate record id `{0}`")]
    DuplicateRecord(String),

    #[error("query distribution has no positive weight")]
    EmptyDistribution,

    #[error("distribution is not expressive: query {witness} has zero weight")]
    NonExpressive { witness: QueryRect },

    #[error("negative weight for query {0}")]
    NegativeWeight(QueryRect),

    #[error("empty leakage trace")]
    EmptyTrace,

    #[error("values must differ")]
    IdenticalValues,

    #[error("missing column `{0}` in dataset header")]
    MissingColumn(String),

    #[error("non-numeric cell `{value}` in column `{column}` at row {row}")]
    NonNumericCell {
        column: String,
        value: String,
        row: usize,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for cap violations, 3 for
    /// configuration or input problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 2,
            Error::Config(_)
            | Error::Parse { .. }
            | Error::MissingColumn(_)
            | Error::NonNumericCell { .. }
            | Error::InvalidDomain { .. } => 3,
            _ => 1,
        }
    }
}
