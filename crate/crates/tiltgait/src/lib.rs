//! File formats, parallel sweeps and reports around [`tiltgait_core`].
//!
//! Every file written here is plain text with floating-point values rounded
//! to 12 significant digits, so outputs are byte-stable for fixed inputs and
//! independent of the worker count.

// `!(x > 0.0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod format;
pub mod io;
pub mod parallel;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
