use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error("inconsistent partition: index {index} out of range for cloud of {len} points")]
    InconsistentPartition { index: usize, len: usize },

    #[error("degenerate support: {0}")]
    DegenerateSupport(&'static str),

    #[error("oracle size limit: cloud has {len} points, brute force accepts at most {max}")]
    OracleSizeLimit { len: usize, max: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid sphere: {0}")]
    InvalidSphere(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
