//! Crate-wide error type.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::driver::SolveReport;
use crate::sca::ScaIterRecord;

#[derive(Debug, Clone)]
pub enum Error {
    /// Catalog lookup miss; carries the closest valid identifier.
    UnknownScheme { name: String, suggestion: String },
    /// A quantity that must be strictly positive was not.
    NonpositiveInput { what: &'static str, value: f64 },
    /// A system constant or generator parameter is out of range.
    InvalidConfig { what: &'static str, value: f64 },
    /// Compute allocation was requested for an empty offloading set.
    EmptyOffloadSet,
    /// No tried anchor gives the named offloader a positive secrecy rate, so
    /// the power sub-problem has no strictly feasible start.
    InfeasibleStart { device: usize },
    /// The barrier Newton solver stopped making progress.
    SolverStall {
        sca_iter: usize,
        trace: alloc::vec::Vec<ScaIterRecord>,
    },
    /// The alternating loop hit its iteration cap; the partial report (with
    /// the full objective trace) is attached.
    NoConvergence { report: Box<SolveReport> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownScheme { name, suggestion } => {
                write!(f, "unknown scheme {name:?}; closest match is {suggestion:?}")
            }
            Error::NonpositiveInput { what, value } => {
                write!(f, "{what} must be positive, got {value}")
            }
            Error::InvalidConfig { what, value } => {
                write!(f, "invalid configuration: {what} = {value}")
            }
            Error::EmptyOffloadSet => write!(f, "compute allocation over an empty offloading set"),
            Error::InfeasibleStart { device } => {
                write!(
                    f,
                    "device {device} has zero worst-case secrecy rate at every tried anchor"
                )
            }
            Error::SolverStall { sca_iter, .. } => {
                write!(f, "barrier solver stalled at SCA iterate {sca_iter}")
            }
            Error::NoConvergence { report } => {
                write!(
                    f,
                    "alternating optimization did not converge within {} iterations",
                    report.ao_iters
                )
            }
        }
    }
}

impl core::error::Error for Error {}
