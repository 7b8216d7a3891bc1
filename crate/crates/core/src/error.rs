use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} exceeds cap of {cap}")]
    CapExceeded { what: String, cap: u128 },

    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("pattern placement at offset {offset:?} leaves the window")]
    OutOfWindow { offset: Vec<i64> },

    #[error("synthesized configuration failed verification: {0}")]
    VerificationFailed(String),
}

impl SftError {
    pub(crate) fn cap(what: impl Into<String>, cap: impl Into<u128>) -> Self {
        SftError::CapExceeded {
            what: what.into(),
            cap: cap.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SftError>;
