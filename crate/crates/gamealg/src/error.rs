use thiserror::Error;

/// Errors surfaced by the workbench.
///
/// `Numerical` marks failures of iterative or conditioning-sensitive routines;
/// everything else is an input/contract violation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    Dimension {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("generator `{0}` has no assigned matrix")]
    MissingGenerator(String),

    #[error("unknown library instance `{0}`")]
    UnknownInstance(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<V> = std::result::Result<V, Error>;

impl Error {
    pub(crate) fn dim(expected: usize, got: usize, context: &str) -> Self {
        Error::Dimension {
            expected,
            got,
            context: context.to_string(),
        }
    }
}
