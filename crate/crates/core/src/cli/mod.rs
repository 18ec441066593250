//! JSON-configured experiment runner.
//!
//! [`config`] parses and validates documents, [`runner`] dispatches on the
//! mode and writes `<prefix>_series.csv`, `<prefix>_result.json` and
//! `<prefix>_state_<k>.txt`, [`io`] owns the file formats and [`verify`] is
//! the seeded property suite.

pub mod config;
pub mod io;
pub mod runner;
pub mod verify;

use std::fmt;
use std::path::{Path, PathBuf};

pub use config::{parse_config, ConfigError, ExperimentConfig, Mode};
pub use runner::{load_config, run, RunOptions, RunSummary};

/// Everything that can stop a run.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    /// The config file itself could not be read.
    ConfigFile { path: PathBuf, source: std::io::Error },
    StateFile { path: PathBuf, line: usize, reason: String },
    Io { path: PathBuf, source: std::io::Error },
    Numerical(crate::Error),
    /// The verify suite ran to completion with failing checks.
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// 0 is success; 1 numerical failure; 2 bad configuration or input.
    pub fn exit_code(&self) -> i32 {
        use crate::Error as E;
        match self {
            CliError::Config(_) | CliError::ConfigFile { .. } | CliError::StateFile { .. } => 2,
            CliError::Numerical(
                E::InvalidGrid(_)
                | E::SizeMismatch { .. }
                | E::GridMismatch
                | E::UnsupportedDimension(_)
                | E::InvalidGaugeElement { .. }
                | E::DegenerateFamily
                | E::InvalidParameter { .. }
                | E::StabilityGuard { .. }
                | E::NotLinearizable(_),
            ) => 2,
            CliError::Numerical(_) | CliError::Io { .. } | CliError::VerifyFailed { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::ConfigFile { path, source } => write!(f, "cannot read config {}: {source}", path.display()),
            CliError::StateFile { path, line, reason } => write!(f, "{}:{line}: {reason}", path.display()),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::VerifyFailed { failed, total } => write!(f, "{failed} of {total} checks failed"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Config(e) => Some(e),
            CliError::Io { source, .. } | CliError::ConfigFile { source, .. } => Some(source),
            CliError::Numerical(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e)
    }
}
