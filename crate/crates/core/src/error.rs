//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A dimension is invalid: non-prime `d`, or two objects disagree on size.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A setting, outcome, or power index is out of its allowed range.
    #[error("index error: {0}")]
    Index(String),

    /// An operand that must be traceless is not; carries `|tr M|`.
    #[error("matrix is not traceless: |tr| = {0:.3e}")]
    Trace(f64),

    /// A candidate fiducial failed unit-norm or SIC validation.
    #[error("fiducial rejected: {0}")]
    Fiducial(String),

    /// Coefficient tensor data violates a structural invariant.
    #[error("tensor inconsistency: {0}")]
    Consistency(String),

    /// A certificate precondition does not hold, so the closed-form bound
    /// would be meaningless.
    #[error("certificate precondition failed: {0}")]
    Certificate(String),

    /// Exact enumeration was requested where the search space is too large.
    #[error("exact enumeration infeasible for d = {0}; use lhv_heuristic")]
    Infeasible(usize),

    /// Classical bound does not lie strictly below the quantum bound.
    #[error("no violation: L = {l} is not below Q = {q}")]
    NoViolation { l: f64, q: f64 },

    /// A state argument is not a valid pure state or density matrix.
    #[error("invalid quantum state: {0}")]
    State(String),

    /// A probability table is unnormalized or negative.
    #[error("invalid probability table: {0}")]
    Probability(String),

    /// File or serialization failure while reading/writing artifacts.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
