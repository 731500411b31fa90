use std::path::PathBuf;

use glasso_knots_core::Error as CoreError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("cannot open {path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {cell:?} as a number")]
    Parse {
        row: usize,
        column: usize,
        cell: String,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// 1 for problems with the user's input, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(CoreError::NoConvergence(_)) => 2,
            Error::Write(_) | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
