//! Closed gaits on the surface, their biased counterparts and vertices.

use alloc::string::String;
use alloc::vec::Vec;

use crate::colormap::{track_branch, validate_gait_path, ColorChoice, PathSample, ValidationConfig, ValidationReport};
use crate::error::Error;
use crate::singularity::{surface_residual, GaitPoint};
use crate::solver::{assemble, classify_root, newton_rear, solve_rear_angles, FrontPair, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaitSample {
    /// Seconds since the start of the period.
    pub t: f64,
    pub point: GaitPoint,
}

/// Where a gait came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Rectangle(RectangleSpec),
    Bias { of: String, eta: f64 },
    External,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gait {
    pub name: String,
    pub period_s: f64,
    pub samples: Vec<GaitSample>,
    pub closed: bool,
    pub provenance: Provenance,
}

impl Gait {
    pub fn new(
        name: impl Into<String>,
        period_s: f64,
        samples: Vec<GaitSample>,
        closed: bool,
        provenance: Provenance,
    ) -> Result<Self, Error> {
        if !(period_s > 0.0) || !period_s.is_finite() {
            return Err(Error::InvalidGait(alloc::format!("period {period_s} must be positive")));
        }
        let first = samples.first().ok_or_else(|| Error::InvalidGait("no samples".into()))?;
        if first.t != 0.0 {
            return Err(Error::InvalidGait("first sample must be at t = 0".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidGait(alloc::format!(
                    "sample times not increasing at t = {}",
                    w[1].t
                )));
            }
        }
        if samples.last().is_some_and(|s| !(s.t < period_s)) {
            return Err(Error::InvalidGait("sample time beyond the period".into()));
        }
        for s in &samples {
            GaitPoint::from_array(s.point.to_array())?;
        }
        Ok(Self {
            name: name.into(),
            period_s,
            samples,
            closed,
            provenance,
        })
    }

    /// Single-sample gait resting at `point`.
    pub fn constant(name: impl Into<String>, point: GaitPoint) -> Result<Self, Error> {
        Self::new(
            name,
            1.0,
            alloc::vec![GaitSample { t: 0.0, point }],
            true,
            Provenance::External,
        )
    }

    pub fn points(&self) -> impl Iterator<Item = GaitPoint> + '_ {
        self.samples.iter().map(|s| s.point)
    }

    pub fn fronts(&self) -> Vec<FrontPair> {
        self.samples
            .iter()
            .map(|s| FrontPair {
                alpha1: s.point.alpha1,
                alpha2: s.point.alpha2,
            })
            .collect()
    }

    pub fn max_surface_residual(&self) -> f64 {
        self.points().map(|p| surface_residual(&p)).fold(0.0, f64::max)
    }

    pub fn is_on_surface(&self, tol: f64) -> bool {
        self.max_surface_residual() <= tol
    }

    /// Labels every sample by its continuation slopes and attaches an optional
    /// colour declaration, ready for [`validate_gait_path`].
    pub fn to_path(&self, color: Option<ColorChoice>, cfg: &SolverConfig) -> Vec<PathSample> {
        self.samples
            .iter()
            .map(|s| {
                let front = FrontPair {
                    alpha1: s.point.alpha1,
                    alpha2: s.point.alpha2,
                };
                let rear = [s.point.alpha3, s.point.alpha4];
                let class = classify_root(front, rear, cfg.classify_step, cfg);
                PathSample {
                    front,
                    root: assemble(front, rear, class.labels),
                    color,
                }
            })
            .collect()
    }

    pub fn validate(
        &self,
        color: Option<ColorChoice>,
        solver: &SolverConfig,
        cfg: &ValidationConfig,
    ) -> Result<ValidationReport, Error> {
        validate_gait_path(&self.to_path(color, solver), self.closed, cfg)
    }
}

/// Which rear root a rectangle gait rides on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchChoice {
    Color(ColorChoice),
    /// `(alpha3, alpha4) = (alpha1, alpha2)`, regardless of the sign of `R`.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    CounterClockwise,
    Clockwise,
}

/// Axis-aligned rectangle in the front-pair plane.
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleSpec {
    pub name: String,
    pub alpha1: (f64, f64),
    pub alpha2: (f64, f64),
    pub direction: Direction,
    pub samples: usize,
    pub branch: BranchChoice,
    pub period_s: f64,
}

impl RectangleSpec {
    pub fn new(name: impl Into<String>, alpha1: (f64, f64), alpha2: (f64, f64), branch: BranchChoice) -> Self {
        Self {
            name: name.into(),
            alpha1,
            alpha2,
            direction: Direction::CounterClockwise,
            samples: 128,
            branch,
            period_s: 1.0,
        }
    }

    pub fn check(&self) -> Result<(), Error> {
        for (lo, hi) in [self.alpha1, self.alpha2] {
            if !(lo < hi) {
                return Err(Error::InvalidSpec(alloc::format!("range [{lo}, {hi}] is empty")));
            }
            FrontPair::new(lo, hi)?;
        }
        if self.samples < 8 {
            return Err(Error::InvalidSpec(alloc::format!(
                "{} samples, need at least 8",
                self.samples
            )));
        }
        if !(self.period_s > 0.0) {
            return Err(Error::InvalidSpec("period must be positive".into()));
        }
        Ok(())
    }

    /// Corners in traversal order, starting at `(min alpha1, min alpha2)`.
    pub fn corners(&self) -> [FrontPair; 4] {
        let (l1, h1) = self.alpha1;
        let (l2, h2) = self.alpha2;
        let c = |a, b| FrontPair { alpha1: a, alpha2: b };
        match self.direction {
            Direction::CounterClockwise => [c(l1, l2), c(h1, l2), c(h1, h2), c(l1, h2)],
            Direction::Clockwise => [c(l1, l2), c(l1, h2), c(h1, h2), c(h1, l2)],
        }
    }

    /// Perimeter samples at constant speed with every corner included.
    /// Returns `(t, front)` pairs; `t` is in `[0, period)`.
    pub fn perimeter(&self) -> Vec<(f64, FrontPair)> {
        let corners = self.corners();
        let lens: Vec<f64> = (0..4).map(|k| corners[k].distance(&corners[(k + 1) % 4])).collect();
        let total: f64 = lens.iter().sum();
        let counts = allocate(&lens, self.samples);
        let mut out = Vec::with_capacity(self.samples);
        let mut arc = 0.0;
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for m in 0..counts[k] {
                let f = m as f64 / counts[k] as f64;
                let fp = FrontPair {
                    alpha1: if m == 0 {
                        a.alpha1
                    } else {
                        a.alpha1 + f * (b.alpha1 - a.alpha1)
                    },
                    alpha2: if m == 0 {
                        a.alpha2
                    } else {
                        a.alpha2 + f * (b.alpha2 - a.alpha2)
                    },
                };
                out.push(((arc + f * lens[k]) / total * self.period_s, fp));
            }
            arc += lens[k];
        }
        out
    }
}

/// Splits `n` samples across sides proportionally to length (largest
/// remainder), at least one per side.
fn allocate(lens: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = lens.iter().sum();
    let spare = n - lens.len();
    let exact: Vec<f64> = lens.iter().map(|l| l / total * spare as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| 1 + *e as usize).collect();
    let mut left = n - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..lens.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - libm::floor(exact[a]);
        let rb = exact[b] - libm::floor(exact[b]);
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for k in order {
        if left == 0 {
            break;
        }
        counts[k] += 1;
        left -= 1;
    }
    counts
}

/// Tolerance for the wrap-around continuation to reproduce the first sample.
const PERIODIC_TOL: f64 = 1e-8;

/// Lifts a rectangle in the front-pair plane onto the requested branch by
/// continuation, then certifies the result.
pub fn rectangle_gait(
    spec: &RectangleSpec,
    solver: &SolverConfig,
    validation: &ValidationConfig,
) -> Result<Gait, Error> {
    spec.check()?;
    let perim = spec.perimeter();
    let fronts: Vec<FrontPair> = perim.iter().map(|(_, f)| *f).collect();

    let start = fronts[0];
    let roots = solve_rear_angles(start, solver)?;
    let initial = match spec.branch {
        BranchChoice::Color(c) => roots.iter().find(|r| c.admits(r)),
        BranchChoice::Identity => roots
            .iter()
            .find(|r| libm::hypot(r.alpha3 - start.alpha1, r.alpha4 - start.alpha2) < 1e-6),
    }
    .ok_or(Error::BranchUnavailable { index: 0 })?;

    let rears = track_branch(&fronts, initial.rear(), solver, validation.continuity_bound)?;
    if let BranchChoice::Color(_) = spec.branch {
        for (index, (fp, r)) in fronts.iter().zip(&rears).enumerate() {
            if !(assemble(*fp, *r, initial.labels).r_value < 0.0) {
                return Err(Error::BranchUnavailable { index });
            }
        }
    }
    let last = *rears.last().expect("at least 8 samples");
    let wrapped = newton_rear(start, last, solver).ok_or(Error::NoConvergence {
        alpha1: start.alpha1,
        alpha2: start.alpha2,
    })?;
    let gap = libm::hypot(wrapped[0] - rears[0][0], wrapped[1] - rears[0][1]);
    if gap > PERIODIC_TOL {
        return Err(Error::BranchJump {
            index: fronts.len(),
            jump: gap,
        });
    }

    let color = match spec.branch {
        BranchChoice::Color(c) => Some(c),
        BranchChoice::Identity => None,
    };
    let samples: Vec<GaitSample> = perim
        .iter()
        .zip(&rears)
        .map(|((t, fp), r)| {
            Ok(GaitSample {
                t: *t,
                point: fp.with_rear(r[0], r[1])?,
            })
        })
        .collect::<Result<_, Error>>()?;
    let gait = Gait::new(
        spec.name.clone(),
        spec.period_s,
        samples,
        true,
        Provenance::Rectangle(spec.clone()),
    )?;
    let report = gait.validate(color, solver, validation)?;
    if !report.valid {
        return Err(Error::ValidationFailed(alloc::boxed::Box::new(report)));
    }
    Ok(gait)
}

/// Scaling coefficient for the rear tilting angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasSpec {
    eta: f64,
}

impl BiasSpec {
    pub fn new(eta: f64) -> Result<Self, Error> {
        if eta > 0.0 && eta < 1.0 {
            Ok(Self { eta })
        } else {
            Err(Error::InvalidBias { eta })
        }
    }

    pub fn eta(self) -> f64 {
        self.eta
    }
}

/// Keeps the front angles and scales the rear ones by `eta`. The result is
/// generally off the surface.
pub fn bias_gait(g: &Gait, bias: BiasSpec) -> Gait {
    let eta = bias.eta;
    Gait {
        name: alloc::format!("{}-biased", g.name),
        period_s: g.period_s,
        samples: g
            .samples
            .iter()
            .map(|s| GaitSample {
                t: s.t,
                point: GaitPoint {
                    alpha3: eta * s.point.alpha3,
                    alpha4: eta * s.point.alpha4,
                    ..s.point
                },
            })
            .collect(),
        closed: g.closed,
        provenance: Provenance::Bias {
            of: g.name.clone(),
            eta,
        },
    }
}

/// Tolerance for a component to count as attaining its extremum.
pub const VERTEX_TOL: f64 = 1e-9;

/// Samples at which every tilting angle sits at its per-period minimum or
/// maximum. Duplicates are merged; the result is sorted lexicographically.
pub fn gait_vertices(g: &Gait) -> Vec<GaitPoint> {
    let mut lo = [f64::INFINITY; 4];
    let mut hi = [f64::NEG_INFINITY; 4];
    for p in g.points() {
        for (k, v) in p.to_array().into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let at_extreme = |k: usize, v: f64| (v - lo[k]).abs() <= VERTEX_TOL || (hi[k] - v).abs() <= VERTEX_TOL;
    let mut out: Vec<GaitPoint> = Vec::new();
    for p in g.points() {
        let a = p.to_array();
        if (0..4).all(|k| at_extreme(k, a[k]))
            && !out
                .iter()
                .any(|q| q.to_array().iter().zip(&a).all(|(x, y)| (x - y).abs() <= VERTEX_TOL))
        {
            out.push(p);
        }
    }
    out.sort_by(|x, y| {
        let (x, y) = (x.to_array(), y.to_array());
        x.iter()
            .zip(&y)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    out
}

/// Closed polyline gait through the given points, one sample per point.
pub fn gait_from_points(name: impl Into<String>, period_s: f64, points: Vec<GaitPoint>) -> Result<Gait, Error> {
    let n = points.len();
    let samples = points
        .into_iter()
        .enumerate()
        .map(|(i, point)| GaitSample {
            t: i as f64 / n as f64 * period_s,
            point,
        })
        .collect();
    Gait::new(name, period_s, samples, true, Provenance::External)
}
