use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bhsum_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    /// A hard inequality violation; the report has already been written.
    #[error("hard violation, witness written to {0}")]
    Violation(PathBuf),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 2,
            _ => 1,
        }
    }
}
