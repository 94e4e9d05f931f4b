use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("strings must have equal length (got {a} and {b})")]
    LengthMismatch { a: usize, b: usize },

    #[error("edit distance exceeds bound {bound}")]
    DistanceExceedsBound { bound: usize },

    #[error("n = {n} exceeds the two-sided materialization limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("could not certify instance after {attempts} attempts: {reason}")]
    Certification { attempts: usize, reason: String },

    #[error("malformed index file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
