use std::path::PathBuf;

use crate::imageio::PgmError;

/// Errors from file handling, scans and the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] phasespace_core::Error),
    #[error("{path}: {source}")]
    Pgm { path: PathBuf, source: PgmError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Stable machine-readable category.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Core(e) => e.category(),
            Error::Pgm { .. } => "parse",
            Error::Io { .. } => "io",
            Error::Csv(_) | Error::Json(_) => "io",
            Error::Usage(_) => "usage",
        }
    }

    /// Process exit code for this category.
    pub fn exit_code(&self) -> i32 {
        exit_code_for(self.category())
    }
}

/// Exit codes by category. `2` is reserved for argument-parsing errors.
pub fn exit_code_for(category: &str) -> i32 {
    match category {
        "usage" => 2,
        "invalid-parameter" => 3,
        "invalid-dimension" => 4,
        "invalid-state" => 5,
        "degenerate-input" => 6,
        "resource" => 7,
        "empty-region" => 8,
        "insufficient-data" => 9,
        "invalid-data" => 10,
        "parse" => 11,
        "io" => 12,
        _ => 1,
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
