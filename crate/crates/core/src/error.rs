//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Inversion of zero in a coefficient field.
    #[error("division by zero")]
    DivisionByZero,

    /// Two series with incompatible truncation specifications were combined.
    #[error("incompatible truncation specs: {0}")]
    Truncation(String),

    /// An operation was applied outside its domain (bad constant term,
    /// mismatched partition sizes, out-of-range index, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact enumeration was requested beyond its stated budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
