//! Library-wide error type.

use crate::lattice::LatticePoint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expression contains a formal square root; exact evaluation is unavailable (use approximate evaluation)")]
    HalfRootNotExact,

    #[error("growth inference does not cover quotient nodes; use a window fit or a divisibility witness")]
    QuotientNotInferable,

    #[error("operation requires at least one expression")]
    EmptyList,

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("expression vanishes at {0:?}; no unit witness exists there")]
    VanishesAt(LatticePoint),

    #[error("separator requires two distinct points")]
    EqualPoints,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("coordinate overflow while scanning from {0:?}")]
    CoordinateOverflow(LatticePoint),

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
