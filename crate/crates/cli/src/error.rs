use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::ValidationFailed(_) => 1,
            CliError::InvalidParams(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }
}

impl From<zeno_discord::Error> for CliError {
    fn from(e: zeno_discord::Error) -> Self {
        use zeno_discord::Error as E;
        match e {
            E::InvalidParameter(_) | E::DomainError { .. } | E::NonHermitianInput { .. } => {
                CliError::InvalidParams(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
