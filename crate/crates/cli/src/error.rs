use thiserror::Error;

/// Exit code on success.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verification or bound check fails.
pub const EXIT_VERIFY: i32 = 1;
/// Exit code on usage or configuration errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Core(#[from] definetti::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}
