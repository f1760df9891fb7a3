use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("point does not belong to the space: {0}")]
    PointMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a normed vector space, got a finite metric space")]
    NeedsVectorSpace,

    #[error("molecule has non-zero total weight {0}")]
    NonZeroAverage(f64),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("invalid interval union: {0}")]
    InvalidIntervals(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("curve never meets the base hyperplane")]
    NoTrace,

    #[error("transport solver did not converge: {0}")]
    SolverFailure(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
}
