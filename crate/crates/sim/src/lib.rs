//! Batch tooling around [`pqoff_core`]: the flat key-value file format used
//! for configs and scenario replay, solve-report rendering, and the
//! Monte-Carlo sweep harness behind the `pqoff` command line.

pub mod config;
pub mod experiments;
pub mod kv;
pub mod report;
pub mod scenario_io;

use std::fmt;

#[derive(Debug)]
pub enum SimError {
    /// Malformed or unknown configuration input; the string names the key,
    /// file or value at fault.
    Config(String),
    Io { path: String, source: std::io::Error },
    /// A solver failure bubbled up from the core crate.
    Solver(pqoff_core::Error),
    /// More than the tolerated share of Monte-Carlo runs failed to converge.
    TooManyExclusions { excluded: usize, attempted: usize },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Config(msg) => write!(f, "{msg}"),
            SimError::Io { path, source } => write!(f, "{path}: {source}"),
            SimError::Solver(e) => write!(f, "solver: {e}"),
            SimError::TooManyExclusions { excluded, attempted } => write!(
                f,
                "{excluded} of {attempted} runs failed to converge (tolerated: 1%)"
            ),
        }
    }
}

impl std::error::Error for SimError {}

impl From<pqoff_core::Error> for SimError {
    fn from(e: pqoff_core::Error) -> Self {
        SimError::Solver(e)
    }
}

impl SimError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        SimError::Io { path: path.display().to_string(), source }
    }
}
