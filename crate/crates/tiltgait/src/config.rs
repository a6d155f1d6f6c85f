//! Run configuration: an optional JSON file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tiltgait_core::{AttitudeGrid, SolverConfig, ValidationConfig};

use crate::error::{Error, Result};

/// Default attitude grid resolution and time-sample count for `singular`.
pub const DEFAULT_RESOLUTION: usize = 401;
pub const DEFAULT_TIME_SAMPLES: usize = 64;
/// Fewest time samples accepted from the command line.
pub const MIN_TIME_SAMPLES: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub seed_grid: Option<usize>,
    pub newton_tol: Option<f64>,
    pub dedup_radius: Option<f64>,
    pub max_iter: Option<usize>,
    pub slope_threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationSection {
    pub surface_tol: Option<f64>,
    pub continuity_bound: Option<f64>,
}

/// Every field is optional; missing values fall back to the defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub validation: ValidationSection,
    pub grid_n: Option<usize>,
    pub attitude_resolution: Option<usize>,
    pub time_samples: Option<usize>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// Applies `overrides` on top of `self`, section by section.
    pub fn merge_solver(&mut self, overrides: &SolverSection) {
        let s = &mut self.solver;
        s.seed_grid = overrides.seed_grid.or(s.seed_grid);
        s.newton_tol = overrides.newton_tol.or(s.newton_tol);
        s.dedup_radius = overrides.dedup_radius.or(s.dedup_radius);
        s.max_iter = overrides.max_iter.or(s.max_iter);
        s.slope_threshold = overrides.slope_threshold.or(s.slope_threshold);
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::default();
        let s = &self.solver;
        if let Some(v) = s.seed_grid {
            cfg.seed_grid = v;
        }
        if let Some(v) = s.newton_tol {
            cfg.residual_tol = v;
        }
        if let Some(v) = s.dedup_radius {
            cfg.dedup_radius = v;
        }
        if let Some(v) = s.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = s.slope_threshold {
            cfg.slope_threshold = v;
        }
        cfg.validate().map_err(|e| Error::usage(e.to_string()))?;
        Ok(cfg)
    }

    pub fn validation_config(&self) -> Result<ValidationConfig> {
        let mut cfg = ValidationConfig::default();
        if let Some(v) = self.validation.surface_tol {
            cfg.surface_tol = v;
        }
        if let Some(v) = self.validation.continuity_bound {
            cfg.continuity_bound = v;
        }
        if !(cfg.surface_tol > 0.0) || !(cfg.continuity_bound > 0.0) {
            return Err(Error::usage("validation tolerances must be positive"));
        }
        Ok(cfg)
    }

    pub fn attitude_grid(&self) -> Result<AttitudeGrid> {
        let n = self.attitude_resolution.unwrap_or(DEFAULT_RESOLUTION);
        AttitudeGrid::with_resolution(n).map_err(|e| Error::usage(e.to_string()))
    }

    pub fn time_samples(&self) -> Result<usize> {
        let n = self.time_samples.unwrap_or(DEFAULT_TIME_SAMPLES);
        if n < MIN_TIME_SAMPLES {
            return Err(Error::usage(format!(
                "need at least {MIN_TIME_SAMPLES} time samples, got {n}"
            )));
        }
        Ok(n)
    }
}

/// Fails before any computation if the file cannot be created: its parent
/// directory must exist.
pub fn check_output_path(path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_owned(),
        _ => PathBuf::from("."),
    };
    if !parent.is_dir() {
        return Err(Error::Io {
            path: path.to_owned(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "output directory does not exist"),
        });
    }
    Ok(())
}
