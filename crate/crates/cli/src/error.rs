use thiserror::Error;

use cuntz::CuError;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {name}: {reason}")]
    Validation { name: String, reason: String },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] CuError),
}

impl CliError {
    pub fn validation(name: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Validation {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
