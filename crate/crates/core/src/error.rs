use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad graph, signal, state or file contents.
    #[error("validation error: {0}")]
    Validation(String),

    /// Well-formed input that violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A graph map that fails to respect tails, heads or reversal.
    #[error("map is not structure-preserving at dart {dart}: {reason}")]
    Structural { dart: usize, reason: String },

    #[error("edge {edge} has length {length}; bisimulation needs every edge of length 1 (rescale the environment first)")]
    NonUnitLength { edge: usize, length: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Input could not be parsed or validated (as opposed to a failed precondition).
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Json(_))
    }
}
