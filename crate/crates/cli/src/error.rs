use std::path::PathBuf;

use thiserror::Error;

use crate::unitary_file::UnitaryFileError;

/// Everything the driver can fail with. [`CliError::exit_code`] maps each
/// failure to the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    UnitaryFile { path: PathBuf, source: UnitaryFileError },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    Input(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Sim(#[from] qlgas::Error),
}

impl CliError {
    /// `3` for a violated numerical invariant, `2` for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Sim(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
