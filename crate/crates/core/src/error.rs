use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent p = {0} is below 1")]
    InvalidExponent(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is outside the supported range")]
    UnsupportedDimension(usize),
    #[error("empty point set")]
    Empty,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("gauge body is not origin-symmetric with the origin in its interior: {0}")]
    InvalidGauge(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("{0} did not converge: {1}")]
    NonConvergence(&'static str, String),
    #[error("combinatorial budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("linear program {0}")]
    Lp(&'static str),
    #[error("integer overflow while clearing denominators")]
    Overflow,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
