use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed an argument outside the operation's documented range.
    #[error("usage error: {0}")]
    Usage(String),

    /// Argument is well formed but outside the mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structure (embedding, partition path, sequence) violated its invariants.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("verification failed [{check}]: {witness}")]
    Verification { check: String, witness: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn verification(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Verification {
            check: check.into(),
            witness: witness.into(),
        }
    }

    /// Process exit code: 1 for a failed check, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification { .. } => 1,
            _ => 2,
        }
    }
}
