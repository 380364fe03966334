use std::path::PathBuf;

/// Failures of a command run, each mapped to a process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or values; nothing was computed.
    #[error("usage error: {0}")]
    Usage(String),

    /// A precondition in the numeric core failed.
    #[error(transparent)]
    Core(#[from] spincouple_core::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    /// `2` for everything raised before or instead of a result.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

macro_rules! usage {
    ($($arg:tt)*) => {
        $crate::error::CliError::Usage(format!($($arg)*))
    };
}
pub(crate) use usage;
