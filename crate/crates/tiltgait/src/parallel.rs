//! Worker-pool versions of the grid sweep and the gait union. Work items are
//! independent and results are merged in index order, so the output equals
//! the sequential one for any worker count.

use rayon::prelude::*;
use tiltgait_core::atlas::{solve_grid_point, GridSpec};
use tiltgait_core::attitude::{merge_union, sample_locus, time_sample_indices};
use tiltgait_core::{AttitudeGrid, ContourSet, Gait, SolverConfig, SurfaceAtlas};

use crate::error::{Error, Result};

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::usage("--jobs must be at least 1"));
        }
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

/// `jobs = None` uses one worker per available core.
pub fn sweep_grid(grid: GridSpec, cfg: &SolverConfig, jobs: Option<usize>) -> Result<SurfaceAtlas> {
    let n = grid.n;
    let points = pool(jobs)?.install(|| {
        (0..n * n)
            .into_par_iter()
            .map(|k| solve_grid_point(grid, k / n, k % n, cfg))
            .collect()
    });
    Ok(SurfaceAtlas::from_points(grid, points))
}

pub fn gait_singular_union(
    g: &Gait,
    time_samples: usize,
    grid: &AttitudeGrid,
    jobs: Option<usize>,
) -> Result<ContourSet> {
    if time_samples == 0 {
        return Err(Error::usage("need at least one time sample"));
    }
    let indices = time_sample_indices(g.samples.len(), time_samples);
    let loci = pool(jobs)?.install(|| indices.par_iter().map(|&k| sample_locus(g, k, grid)).collect());
    Ok(merge_union(g, loci, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tiltgait_core::{bias_gait, rectangle_gait, BiasSpec, BranchChoice, RectangleSpec, ValidationConfig};

    #[test]
    fn sweep_matches_sequential() {
        let grid = GridSpec::new(9).unwrap();
        let cfg = SolverConfig::default();
        let seq = tiltgait_core::sweep_grid(grid, &cfg);
        for jobs in [Some(1), Some(3), None] {
            assert_eq!(sweep_grid(grid, &cfg, jobs).unwrap(), seq);
        }
    }

    #[test]
    fn union_matches_sequential() {
        use std::f64::consts::PI;
        let spec = RectangleSpec::new(
            "gait4",
            (-3.0 * PI / 8.0, -PI / 8.0),
            (PI / 8.0, 3.0 * PI / 8.0),
            BranchChoice::Identity,
        );
        let g = rectangle_gait(&spec, &SolverConfig::default(), &ValidationConfig::default()).unwrap();
        let g = bias_gait(&g, BiasSpec::new(0.8).unwrap());
        let grid = AttitudeGrid::with_resolution(81).unwrap();
        let seq = tiltgait_core::gait_singular_union(&g, 16, &grid).unwrap();
        assert!(!seq.is_empty());
        for jobs in [Some(1), Some(4)] {
            assert_eq!(gait_singular_union(&g, 16, &grid, jobs).unwrap(), seq);
        }
        assert!(sweep_grid(GridSpec::default(), &SolverConfig::default(), Some(0))
            .unwrap_err()
            .is_usage());
    }
}
