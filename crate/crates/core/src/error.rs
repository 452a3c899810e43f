use thiserror::Error;

use crate::siegel::SiegelIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation needs more known coefficients than its input carries.
    #[error("insufficient truncation for {what}: have {have}, need {need}")]
    InsufficientTruncation { what: String, have: u64, need: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigenvalue field of degree {degree} is not supported (at most quadratic)")]
    UnsupportedField { degree: usize },

    #[error("no Shimura partner: {0}")]
    NoShimuraMatch(String),

    #[error(
        "not an eigenform: proportionality fails at {witness} (expected {expected}, found {found})"
    )]
    NotEigenform {
        witness: SiegelIndex,
        expected: String,
        found: String,
    },

    #[error("no nonzero probe coefficient within bound {bound}")]
    NoProbe { bound: u64 },

    #[error("index {index} lies beyond table bound {bound}")]
    OutOfRange { index: SiegelIndex, bound: u64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported schema version {found} (expected {expected})")]
    Schema { found: u32, expected: u32 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn truncation(what: impl Into<String>, have: u64, need: u64) -> Self {
        Error::InsufficientTruncation {
            what: what.into(),
            have,
            need,
        }
    }
}
