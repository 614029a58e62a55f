//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid palette: {0}")]
    InvalidPalette(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    /// A precondition on the inputs does not hold (for example a palette
    /// that is required to be minimality-reduced but is not).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An operation refused to run because it would exceed its search
    /// budget. The tool never silently degrades a verdict; it refuses.
    #[error("budget exceeded for {what}: requested {requested}, limit {limit}")]
    Budget {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// An internal invariant failed. Seeing this is always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
