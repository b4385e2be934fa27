use dulac_core::DulacError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),

    #[error(transparent)]
    Dulac(#[from] DulacError),

    #[error("{0}")]
    Verdict(String),
}

impl CliError {
    /// 1 for domain and verdict failures, 2 for usage, parse and i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Dulac(_) | CliError::Verdict(_) => 1,
        }
    }
}
