use thiserror::Error;

use crate::monoid::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (schema errors, unknown letters, bad syntax).
    #[error("input error: {0}")]
    Input(String),

    #[error("invalid ordered monoid: {0}")]
    InvalidMonoid(ValidationReport),

    /// A configured resource cap was exceeded.
    #[error("resource cap exceeded: {what} has {observed} (cap {cap})")]
    Resource {
        what: &'static str,
        cap: usize,
        observed: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal consistency check failed. Never expected on valid inputs.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
