use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: malformed csv: {message}", path.display())]
    Csv { path: PathBuf, message: String },
    #[error("{}: missing column {column}", path.display())]
    MissingColumn { path: PathBuf, column: String },
    /// `row` counts data rows from 1; the header is not a row.
    #[error("parse error at row {row}, column {column}: {value:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },
    #[error("{}: invalid model: {message}", path.display())]
    Model { path: PathBuf, message: String },
    #[error(transparent)]
    Data(#[from] crude_core::Error),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 4,
            _ => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::FileNotFound(path)
        } else {
            CliError::Io { path, source }
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
