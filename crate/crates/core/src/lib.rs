//! Gait surfaces of a four-rotor tilt-rotor.
//!
//! Attitude-altitude feedback linearization of the tilt-rotor needs an
//! invertible decoupling matrix. Near zero attitude its invertibility
//! condition is `R_phi * phi + R_theta * theta + R != 0`; gaits with
//! `R_phi = R_theta = 0` and `R != 0` are insensitive to small attitude
//! disturbances. This crate
//!
//! * evaluates the condition and its linearization ([`singularity`]),
//! * solves and labels the rear tilting angles on that surface ([`solver`],
//!   [`atlas`]),
//! * certifies gait paths against the two-colour adjacency rule
//!   ([`colormap`]),
//! * builds rectangle gaits, biased gaits and vertices ([`gait`]),
//! * traces singular attitudes and robustness margins ([`attitude`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod atlas;
pub mod attitude;
pub mod colormap;
pub mod error;
pub mod gait;
pub mod singularity;
pub mod solver;

pub use atlas::{paint_map, sweep_grid, triangle_report, ColorAvailability, GridSpec, SurfaceAtlas};
pub use attitude::{
    compare_gaits, gait_singular_union, robustness_margin, singular_locus, AttitudeGrid, ContourSet, RobustnessMargin,
};
pub use colormap::{
    continue_branch, label_adjacency_allowed, type_adjacency_allowed, validate_gait_path, ColorChoice, PathSample,
    RootType, ValidationConfig, ValidationReport,
};
pub use error::Error;
pub use gait::{bias_gait, gait_vertices, rectangle_gait, BiasSpec, BranchChoice, Gait, GaitSample, RectangleSpec};
pub use singularity::{
    eval_full_condition, eval_linearized, eval_r, eval_r_phi, eval_r_theta, eval_zero_attitude, Attitude, GaitPoint,
    LinearizedTriple,
};
pub use solver::{classify_root, solve_rear_angles, FrontPair, LabeledRoot, PlaneLabel, SolverConfig};
