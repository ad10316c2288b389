use thiserror::Error;

use crate::table::ElementId;

/// Errors raised by the library. Axiom failures found by validators are
/// reported as data, not as errors; these variants cover unusable input and
/// exhausted bounds.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Format(String),

    #[error("axiom violated: {0}")]
    Axiom(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("bound exceeded: {what} exceeds the configured limit of {limit}")]
    Bound { what: String, limit: usize },

    #[error("not a Boolean inverse semigroup: {0}")]
    NotBoolean(String),
}

impl Error {
    pub(crate) fn bound(what: impl Into<String>, limit: usize) -> Self {
        Error::Bound { what: what.into(), limit }
    }

    pub(crate) fn not_below(part: ElementId, target: ElementId) -> Self {
        Error::Precondition(format!("element {} is not below {}", part.0, target.0))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
