//! CLI error type with process exit codes.

use thiserror::Error;

/// Failure classes, mapped onto exit codes: 1 validation, 2 numerical,
/// 3 I/O.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] slitflow::Error),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(message.into())
    }
}
