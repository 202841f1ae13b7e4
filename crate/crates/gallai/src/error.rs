//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by library operations.
///
/// `PropertyViolation` is special: it means an inequality the theory
/// guarantees did not hold at runtime, which is either an implementation bug
/// or a counterexample, and is the most important signal an operation can
/// emit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("palette mismatch: expected r={expected}, got r={got}")]
    PaletteMismatch { expected: u32, got: u32 },

    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Stable process exit code for CLI reporting.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PropertyViolation(_) => 2,
            Error::InvalidInput(_) | Error::Parse(_) | Error::PaletteMismatch { .. } => 3,
            Error::ScaleCap(_) => 4,
            Error::BudgetExhausted(_) => 5,
            Error::Io(_) => 3,
        }
    }
}
