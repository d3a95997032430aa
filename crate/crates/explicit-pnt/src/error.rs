use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("log x = {log_x} lies below the first table row ({first})")]
    BelowTable { log_x: String, first: String },
    #[error("partition does not cover the required range: {0}")]
    PartitionNotCovered(String),
    #[error("branch misuse: {0}")]
    BranchMisuse(String),
    #[error("x = {x} exceeds the sieve limit {limit}")]
    AboveLimit { x: String, limit: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("table has no rows")]
    EmptyTable,
    #[error("line {line}: rows are not strictly increasing in log x")]
    Order { line: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
