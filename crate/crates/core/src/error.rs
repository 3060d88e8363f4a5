use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A complex file could not be parsed. Line numbers are 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The request is valid but exceeds a configured size or time budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Floating-point sampling failed its exact post-check past the retry budget.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An operation was applied to a value outside its contract
    /// (e.g. torsion order of a complex that is not a hypertree).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
