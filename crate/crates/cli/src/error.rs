use thiserror::Error;

use crate::format::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Core(#[from] pcm_core::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error("gave up after {generated} generated matrices with {accepted} of {target} accepted")]
    GuardTripped { generated: u64, accepted: usize, target: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit code: 1 usage, 2 parse or validation, 3 numeric or
    /// non-unique.
    pub fn exit_code(&self) -> i32 {
        use pcm_core::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } | CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Core(e) => match e {
                E::NonUnique | E::Numeric(_) | E::NotIndependent { .. } => 3,
                _ => 2,
            },
            CliError::GuardTripped { .. } => 3,
        }
    }
}
