use thiserror::Error;

/// Failures, each mapped to its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{0}")]
    Precondition(String),
    #[error("solver did not converge: {0}")]
    Nonconvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Nonconvergence(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<hypflat_core::Error> for CliError {
    fn from(e: hypflat_core::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
