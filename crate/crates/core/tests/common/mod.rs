#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiltgait_core::{BranchChoice, ColorChoice, GaitPoint, RectangleSpec};

pub const H: f64 = PI / 2.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_angle(r: &mut ChaCha8Rng) -> f64 {
    r.gen_range(-H..=H)
}

pub fn random_point(r: &mut ChaCha8Rng) -> GaitPoint {
    GaitPoint::new(random_angle(r), random_angle(r), random_angle(r), random_angle(r)).unwrap()
}

/// Vertex quadruples printed for the four example gaits, rear angles to three
/// decimals.
pub fn printed_vertices() -> [(&'static str, [[f64; 4]; 4]); 4] {
    let p = PI;
    [
        (
            "gait1",
            [
                [5.0 * p / 16.0, p / 8.0, -0.648, -0.727],
                [5.0 * p / 16.0, 3.0 * p / 8.0, -0.648, -1.512],
                [p / 16.0, 3.0 * p / 8.0, 0.138, -1.512],
                [p / 16.0, p / 8.0, 0.138, -0.727],
            ],
        ),
        (
            "gait2",
            [
                [3.0 * p / 8.0, -3.0 * p / 8.0, -0.844, 0.844],
                [3.0 * p / 8.0, -p / 8.0, -0.844, 0.059],
                [p / 8.0, -p / 8.0, -0.059, 0.059],
                [p / 8.0, -3.0 * p / 8.0, -0.059, 0.844],
            ],
        ),
        (
            "gait3",
            [
                [3.0 * p / 8.0, -3.0 * p / 8.0, 1.178, -1.178],
                [3.0 * p / 8.0, -p / 8.0, 1.178, -0.393],
                [p / 8.0, -p / 8.0, 0.393, -0.393],
                [p / 8.0, -3.0 * p / 8.0, 0.393, -1.178],
            ],
        ),
        (
            "gait4",
            [
                [-p / 8.0, p / 8.0, -0.393, 0.393],
                [-p / 8.0, 3.0 * p / 8.0, -0.393, 1.178],
                [-3.0 * p / 8.0, 3.0 * p / 8.0, -1.178, 1.178],
                [-3.0 * p / 8.0, p / 8.0, -1.178, 0.393],
            ],
        ),
    ]
}

pub fn gait1_spec(branch: BranchChoice) -> RectangleSpec {
    RectangleSpec::new(
        "gait1",
        (PI / 16.0, 5.0 * PI / 16.0),
        (PI / 8.0, 3.0 * PI / 8.0),
        branch,
    )
}

/// Gaits 2 and 3 share this rectangle.
pub fn gait23_spec(name: &str, branch: BranchChoice) -> RectangleSpec {
    RectangleSpec::new(name, (PI / 8.0, 3.0 * PI / 8.0), (-3.0 * PI / 8.0, -PI / 8.0), branch)
}

pub fn gait4_spec() -> RectangleSpec {
    RectangleSpec::new(
        "gait4",
        (-3.0 * PI / 8.0, -PI / 8.0),
        (PI / 8.0, 3.0 * PI / 8.0),
        BranchChoice::Identity,
    )
}

pub fn reference_gaits() -> [RectangleSpec; 4] {
    [
        gait1_spec(BranchChoice::Color(ColorChoice::Blue)),
        gait23_spec("gait2", BranchChoice::Color(ColorChoice::Blue)),
        gait23_spec("gait3", BranchChoice::Color(ColorChoice::Red)),
        gait4_spec(),
    ]
}

/// `atan(1/2.88)`: offset of the non-identity branch,
/// `alpha3 = k - alpha1`, `alpha4 = -k - alpha2`.
pub fn branch_offset() -> f64 {
    (1.0f64 / 2.88).atan()
}
