use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    /// Input is valid but the requested operation does not apply to it.
    #[error("{0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Internal(_) => 3,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
