//! CLI error classification and exit codes.

use thiserror::Error;

use fcf_core::FcfError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("query error: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] FcfError),
}

impl CliError {
    /// 2 for contradictions, 1 for everything else; success is 0.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(FcfError::Contradiction(_)) => 2,
            _ => 1,
        }
    }
}
