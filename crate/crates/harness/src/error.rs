use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// The configuration cannot be run as written. Exit code 2.
    #[error("config error: {0}")]
    Config(String),

    /// A run started but could not complete. Exit code 1.
    #[error("run failed: {0}")]
    Run(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Run(_) | HarnessError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<teamdyn_core::Error> for HarnessError {
    fn from(e: teamdyn_core::Error) -> Self {
        use teamdyn_core::Error as E;
        match e {
            E::Domain(_) | E::Dimension { .. } | E::Config(_) => {
                HarnessError::Config(e.to_string())
            }
            E::EigenvectorUndefined(_) | E::NotConverged { .. } => HarnessError::Run(e.to_string()),
        }
    }
}
