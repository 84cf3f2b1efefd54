use std::io;

use allgenus_core::gfengine::GfError;
use allgenus_core::stats::StatsError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Bounds(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Table(#[from] GfError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl CliError {
    /// 0 success, 1 check failure, 2 usage error, 3 feasibility bound.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            CliError::Bounds(_) => 3,
            CliError::Usage(_) | CliError::Io(_) | CliError::Table(_) | CliError::Stats(_) => 2,
        }
    }
}
