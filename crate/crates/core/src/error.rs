use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid diagram point ({birth}, {death}): birth must be strictly less than death")]
    InvalidPoint { birth: f64, death: f64 },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("invalid order p = {0}: require 1 <= p < infinity")]
    InvalidOrder(f64),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("instance size {size} exceeds limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },

    #[error("isometry violation at pair ({i}, {j}): relative residual {residual:e}")]
    IsometryViolation { i: usize, j: usize, residual: f64 },

    #[error("matching cost bound violated for pair ({i}, {j}): {detail}")]
    BoundViolation { i: usize, j: usize, detail: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A line parsed as numbers but the resulting point breaks `birth < death`.
    /// Kept separate from [`Error::Parse`] so callers can report invariant
    /// violations distinctly from malformed input.
    #[error("line {line}: invalid diagram point ({birth}, {death}): birth must be strictly less than death")]
    InvariantAtLine { line: usize, birth: f64, death: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),
}
