use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("table must be at least 2x2, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },

    #[error("rows have unequal lengths (row {row} has {len}, expected {expected})")]
    Ragged { row: usize, len: usize, expected: usize },

    #[error("entry ({row}, {col}) is negative or not finite: {value}")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("table total is zero")]
    ZeroTotal,

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("row {0} has no mass")]
    ZeroRow(usize),

    #[error("column {0} has no mass")]
    ZeroColumn(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("distribution has a zero entry at index {0}; a strictly positive distribution is required")]
    NotPositive(usize),

    #[error("operation requires a {expected} table, got {rows}x{cols}")]
    WrongShape {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("candidate count {count} exceeds the cap of {cap}")]
    TooManyCandidates { count: u128, cap: usize },

    #[error("rho_M is undefined: a full-dependence candidate coincides with the independence table")]
    ZeroDenominator,

    #[error("zero variance")]
    ZeroVariance,

    #[error("degenerate marginal: {0}")]
    DegenerateMarginal(&'static str),

    #[error("support is not strictly increasing at position {0}")]
    SupportNotIncreasing(usize),

    #[error("sample contains ties; the exact rank formula requires distinct values")]
    Ties,

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
