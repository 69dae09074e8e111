use alloc::string::String;
use core::fmt;

/// Error type shared by the whole crate.
///
/// Variants are coarse on purpose: callers dispatch on the *kind* of failure
/// (bad input, violated precondition, exhausted search bound, ...) and the
/// message carries the specifics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input data: unknown symbol, empty alphabet, ragged block
    /// lengths, an index set expression that does not type-check, etc.
    Domain(String),
    /// Input is well-formed but violates a documented precondition of the
    /// operation (e.g. a construction that needs an irreducible space).
    Precondition(String),
    /// A bounded search ran out of budget before finding its target.
    SearchBound(String),
    /// A construction step failed internally in a way that indicates a bug
    /// (e.g. a self-check on a recoding did not balance).
    Construction(String),
    /// An enumeration horizon was exhausted without reaching a decision.
    Horizon(String),
    /// Invariant breakage that should be unreachable.
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn search_bound(msg: impl Into<String>) -> Self {
        Error::SearchBound(msg.into())
    }

    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    pub fn horizon(msg: impl Into<String>) -> Self {
        Error::Horizon(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// The human-readable message, without the kind prefix.
    pub fn message(&self) -> &str {
        match self {
            Error::Domain(m)
            | Error::Precondition(m)
            | Error::SearchBound(m)
            | Error::Construction(m)
            | Error::Horizon(m)
            | Error::Internal(m) => m,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "invalid input: {m}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::SearchBound(m) => write!(f, "search bound exhausted: {m}"),
            Error::Construction(m) => write!(f, "construction failed: {m}"),
            Error::Horizon(m) => write!(f, "horizon exhausted: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
