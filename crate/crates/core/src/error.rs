use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::colormap::ValidationReport;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Angle `index` (1..=4 tilting, 5 roll, 6 pitch) is NaN or infinite.
    NonFinite {
        index: usize,
    },
    /// Tilting angle `index` lies outside `[-pi/2, pi/2]`.
    OutOfDomain {
        index: usize,
        value: f64,
    },
    /// No Newton start converged at this front pair.
    NoConvergence {
        alpha1: f64,
        alpha2: f64,
    },
    /// Continuation lost its branch at path sample `index`.
    BranchJump {
        index: usize,
        jump: f64,
    },
    /// The requested branch has no root at path sample `index`.
    BranchUnavailable {
        index: usize,
    },
    /// Consecutive front pairs at `index` are further apart than the adjacency step.
    PathTooCoarse {
        index: usize,
        step: f64,
    },
    ValidationFailed(Box<ValidationReport>),
    InvalidBias {
        eta: f64,
    },
    InvalidGrid(String),
    InvalidConfig(String),
    InvalidSpec(String),
    InvalidGait(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { index } => write!(f, "angle #{index} is not finite"),
            Error::OutOfDomain { index, value } => {
                write!(f, "tilting angle alpha{index} = {value} outside [-pi/2, pi/2]")
            }
            Error::NoConvergence { alpha1, alpha2 } => {
                write!(f, "no root converged at (alpha1, alpha2) = ({alpha1}, {alpha2})")
            }
            Error::BranchJump { index, jump } => {
                write!(f, "branch jump of {jump} rad at path sample {index}")
            }
            Error::BranchUnavailable { index } => {
                write!(f, "requested branch has no root at path sample {index}")
            }
            Error::PathTooCoarse { index, step } => {
                write!(f, "path step {step} rad at sample {index} exceeds the adjacency step")
            }
            Error::ValidationFailed(report) => {
                write!(
                    f,
                    "gait failed validation with {} violation(s)",
                    report.violations.len()
                )
            }
            Error::InvalidBias { eta } => write!(f, "scaling coefficient {eta} not in (0, 1)"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidSpec(msg) => write!(f, "invalid rectangle spec: {msg}"),
            Error::InvalidGait(msg) => write!(f, "invalid gait: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
