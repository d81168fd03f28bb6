use thiserror::Error;

/// Errors raised by the number-theoretic kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A lattice basis `[a, b+√N]` that is not closed under multiplication by `√N`.
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),

    /// The continued-fraction engine ran past its step budget.
    #[error("iteration cap of {cap} steps exceeded")]
    IterationCap { cap: usize },

    /// An internal postcondition failed. Always a bug or an arithmetic fault.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// Independent methods disagree on a family member.
    #[error("verification failed for a = {a} (N = {n}): {reason}")]
    Verification { a: u64, n: u64, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
