use thiserror::Error;

use crate::special::SpecialError;

pub type Result<T, E = RexError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RexError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input")]
    EmptyInput,

    #[error("column {index} has zero norm after standardization")]
    ZeroNormColumn { index: usize },

    #[error("response has zero norm after standardization")]
    ZeroNormResponse,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate sample: all values are equal")]
    DegenerateSample,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),

    #[error(transparent)]
    Special(#[from] SpecialError),
}

impl RexError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        RexError::Domain(msg.into())
    }
}

impl From<std::io::Error> for RexError {
    fn from(e: std::io::Error) -> Self {
        RexError::Io(e.to_string())
    }
}
