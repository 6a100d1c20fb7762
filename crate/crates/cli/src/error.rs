use std::fmt::Display;
use std::path::Path;

/// Failures of a CLI run, each mapped to its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad flags.
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] tresor_core::Error),
    #[error("cannot write {path}: {reason}")]
    Output { path: String, reason: String },
}

impl CliError {
    pub fn parse(path: &Path, err: impl Display) -> Self {
        CliError::Parse(format!("{}: {err}", path.display()))
    }

    /// 2 for parse errors, 3 for invalid input data, 4 for domain conditions.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(e) if e.is_validation() => 3,
            CliError::Core(_) => 4,
            CliError::Output { .. } => 1,
        }
    }
}
