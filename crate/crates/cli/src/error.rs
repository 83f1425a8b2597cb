use paramp_core::ParampError;
use thiserror::Error;

/// Everything a command can fail with, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Physics(ParampError),
    #[error("{0}")]
    Search(ParampError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Search(_) => 4,
        }
    }
}

impl From<ParampError> for CliError {
    fn from(e: ParampError) -> Self {
        match e {
            ParampError::GapClosure { .. } | ParampError::DegenerateTrace => CliError::Physics(e),
            ParampError::NoSignChange { .. } => CliError::Search(e),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
