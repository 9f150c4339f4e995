use std::path::PathBuf;

use thiserror::Error;

/// Everything a subcommand can fail with. [`CliError::exit_code`] maps
/// each variant to the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] gqms_core::Error),

    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 1 for anything the caller can fix, 2 for internal failures.
    pub fn exit_code(&self) -> i32 {
        use gqms_core::Error as E;
        match self {
            Self::Usage(_) | Self::Config(_) | Self::Read { .. } | Self::Write { .. } => 1,
            Self::Core(
                E::InvalidParameter(_)
                | E::InvalidGenerator(_)
                | E::OutsideRegion(_)
                | E::NonFinite
                | E::NotSymmetric(_)
                | E::NotHermitian(_)
                | E::NotSquare { .. }
                | E::DimensionMismatch { .. }
                | E::OddDimension(_)
                | E::TooLarge { .. }
                | E::IndexOutOfRange { .. }
                | E::InvalidPartition(_),
            ) => 1,
            Self::Core(_) | Self::Internal(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
