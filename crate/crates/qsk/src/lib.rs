//! Standard-library companion of `qsk-core`: suite configuration,
//! deterministic parameter sampling, parallel suite runs and report files.
//!
//! - [`config`]: the JSON suite configuration
//! - [`suite`]: catalog of checks, samplers and the runner
//! - [`report`]: records, summary, JSON and CSV output
//! - [`cli`]: the `qsk` command line

pub mod cli;
pub mod config;
pub mod report;
pub mod suite;

pub use config::{Caps, SuiteConfig};
pub use report::{Record, Report, Status};
pub use suite::{catalog, run_suite, Check};

/// Failures outside the numerics, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum QskError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("suite run aborted: {0}")]
    Infrastructure(String),
}

impl QskError {
    /// 2 for bad input, 3 for failures of the run itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            QskError::Config(_) | QskError::Params(_) => 2,
            QskError::Io { .. } | QskError::Infrastructure(_) => 3,
        }
    }
}

impl From<qsk_core::Error> for QskError {
    fn from(e: qsk_core::Error) -> Self {
        QskError::Params(e.to_string())
    }
}
