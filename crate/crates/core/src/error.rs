//! Error type shared by all modules.

/// Errors reported by constructors, aggregation operators and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A probability vector failed validation (empty, negative entry,
    /// non-finite entry, or sum away from one).
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    /// An importance vector failed validation.
    #[error("invalid importances: {0}")]
    InvalidImportances(String),

    /// A risk parameter fell outside the half-open interval (0, 1].
    #[error("{name} must be in (0,1], got {value}")]
    ParamOutOfRange { name: &'static str, value: f64 },

    /// Two containers that must agree in length did not.
    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A matrix or tensor entry was NaN or infinite.
    #[error("non-finite value at {0}")]
    NonFinite(String),

    /// An input collection that must be nonempty was empty.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// A count or size parameter was invalid for the operation.
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// Input too large for an exhaustive oracle.
    #[error("{what} supports at most {max} elements, got {got}")]
    TooLarge {
        what: &'static str,
        max: usize,
        got: usize,
    },

    /// Malformed textual input (CSV, JSON, LP).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
