//! Rear tilting angles on the gait surface.
//!
//! For a fixed front pair `(alpha1, alpha2)` the surface is the zero set of
//! `(R_phi, R_theta)` in `(alpha3, alpha4)`. Roots are located by damped
//! Newton iteration from a uniform grid of starts, deduplicated, sorted and
//! then labelled by the local continuation slope of each rear angle against
//! its front partner.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use crate::error::Error;
use crate::singularity::{check_tilt, eval_r, surface_residual, surface_residual_and_jacobian, GaitPoint};

/// Front tilting angles `(alpha1, alpha2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontPair {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl FrontPair {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self, Error> {
        check_tilt(1, alpha1)?;
        check_tilt(2, alpha2)?;
        Ok(Self { alpha1, alpha2 })
    }

    pub(crate) fn unchecked(alpha1: f64, alpha2: f64) -> Self {
        Self { alpha1, alpha2 }
    }

    pub fn with_rear(self, alpha3: f64, alpha4: f64) -> Result<GaitPoint, Error> {
        GaitPoint::new(self.alpha1, self.alpha2, alpha3, alpha4)
    }

    /// Largest per-axis separation.
    pub fn step_to(&self, other: &FrontPair) -> f64 {
        (self.alpha1 - other.alpha1)
            .abs()
            .max((self.alpha2 - other.alpha2).abs())
    }

    pub fn distance(&self, other: &FrontPair) -> f64 {
        libm::hypot(self.alpha1 - other.alpha1, self.alpha2 - other.alpha2)
    }
}

/// Which of the two planes a rear angle lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneLabel {
    /// Rear angle grows with its front partner.
    Plus,
    /// Rear angle shrinks with its front partner.
    Minus,
    /// On (or too close to tell from) the intersection line.
    Intersection,
}

impl PlaneLabel {
    pub fn symbol(self) -> &'static str {
        match self {
            PlaneLabel::Plus => "+",
            PlaneLabel::Minus => "-",
            PlaneLabel::Intersection => "?",
        }
    }

    /// Accepts `+`, `-`, the Unicode minus sign, and `?`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "+" => Some(PlaneLabel::Plus),
            "-" | "\u{2212}" => Some(PlaneLabel::Minus),
            "?" => Some(PlaneLabel::Intersection),
            _ => None,
        }
    }

    pub(crate) fn from_slope(slope: Option<f64>, threshold: f64) -> Self {
        match slope {
            Some(s) if s > threshold => PlaneLabel::Plus,
            Some(s) if s < -threshold => PlaneLabel::Minus,
            _ => PlaneLabel::Intersection,
        }
    }
}

impl fmt::Display for PlaneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A rear-angle root with its plane labels and the constant term `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledRoot {
    pub alpha3: f64,
    pub alpha4: f64,
    /// Labels for `alpha3` and `alpha4`.
    pub labels: [PlaneLabel; 2],
    pub r_value: f64,
    /// `max(|R_phi|, |R_theta|)` at the full quadruple.
    pub residual: f64,
}

impl LabeledRoot {
    pub fn rear(&self) -> [f64; 2] {
        [self.alpha3, self.alpha4]
    }

    pub fn gait_point(&self, front: FrontPair) -> GaitPoint {
        GaitPoint {
            alpha1: front.alpha1,
            alpha2: front.alpha2,
            alpha3: self.alpha3,
            alpha4: self.alpha4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Newton starts per axis over `[-pi/2, pi/2]`.
    pub seed_grid: usize,
    pub step_tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    pub dedup_radius: f64,
    pub domain_slack: f64,
    /// Front-angle perturbation used for plane labelling.
    pub classify_step: f64,
    pub slope_threshold: f64,
    /// Nearest-root matching gives up beyond this distance.
    pub match_radius: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seed_grid: 33,
            step_tol: 1e-12,
            residual_tol: 1e-10,
            max_iter: 50,
            dedup_radius: 1e-6,
            domain_slack: 1e-9,
            classify_step: PI / 64.0,
            slope_threshold: 0.05,
            match_radius: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let positive = [
            self.step_tol,
            self.residual_tol,
            self.dedup_radius,
            self.domain_slack,
            self.classify_step,
            self.slope_threshold,
            self.match_radius,
        ];
        if self.seed_grid < 2 || self.max_iter == 0 || positive.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidConfig(alloc::format!(
                "solver settings must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

fn max_abs(f: [f64; 2]) -> f64 {
    f[0].abs().max(f[1].abs())
}

/// Damped Newton on `(R_phi, R_theta) = 0` in `(alpha3, alpha4)`.
///
/// The step is halved while the residual grows. Returns the iterate once the
/// step falls below `step_tol`, provided the residual is within
/// `residual_tol`. No domain restriction is applied here.
pub fn newton_rear(front: FrontPair, seed: [f64; 2], cfg: &SolverConfig) -> Option<[f64; 2]> {
    let mut x = seed;
    let (mut f, mut j) = surface_residual_and_jacobian([front.alpha1, front.alpha2, x[0], x[1]]);
    let mut res = max_abs(f);
    for _ in 0..cfg.max_iter {
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = [
            -(j[1][1] * f[0] - j[0][1] * f[1]) / det,
            -(-j[1][0] * f[0] + j[0][0] * f[1]) / det,
        ];
        let step = dx[0].abs().max(dx[1].abs());
        if !step.is_finite() {
            return None;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            let (ft, jt) = surface_residual_and_jacobian([front.alpha1, front.alpha2, trial[0], trial[1]]);
            let rt = max_abs(ft);
            if rt < res || (rt <= cfg.residual_tol && res <= cfg.residual_tol) {
                x = trial;
                f = ft;
                j = jt;
                res = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // stalled at rounding level
            return (res <= cfg.residual_tol).then_some(x);
        }
        if lambda * step <= cfg.step_tol {
            return (res <= cfg.residual_tol).then_some(x);
        }
    }
    (res <= cfg.residual_tol).then_some(x)
}

fn lex(a: &[f64; 2], b: &[f64; 2]) -> Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

/// Sorts lexicographically and drops points within `radius` of an earlier
/// kept point.
pub fn dedup_roots(mut roots: Vec<[f64; 2]>, radius: f64) -> Vec<[f64; 2]> {
    roots.sort_by(lex);
    let mut kept: Vec<[f64; 2]> = Vec::with_capacity(roots.len());
    for r in roots {
        if kept.iter().all(|k| dist(*k, r) > radius) {
            kept.push(r);
        }
    }
    kept
}

/// Unlabelled, deduplicated roots inside the closed square, sorted by
/// `(alpha3, alpha4)`.
pub fn find_rear_roots(front: FrontPair, cfg: &SolverConfig) -> Vec<[f64; 2]> {
    let n = cfg.seed_grid;
    let lim = FRAC_PI_2 + cfg.domain_slack;
    let mut found: Vec<[f64; 2]> = Vec::new();
    for p in 0..n {
        let s3 = grid_coord(p, n);
        for q in 0..n {
            let s4 = grid_coord(q, n);
            if let Some(r) = newton_rear(front, [s3, s4], cfg) {
                if r[0].abs() <= lim && r[1].abs() <= lim {
                    let r = [r[0].clamp(-FRAC_PI_2, FRAC_PI_2), r[1].clamp(-FRAC_PI_2, FRAC_PI_2)];
                    if found.iter().all(|k| dist(*k, r) > cfg.dedup_radius) {
                        found.push(r);
                    }
                }
            }
        }
    }
    dedup_roots(found, cfg.dedup_radius)
}

/// `k`-th of `n` evenly spaced points on `[-pi/2, pi/2]`, exact at both ends
/// and at the midpoint.
pub fn grid_coord(k: usize, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    FRAC_PI_2 * ((2 * k) as f64 - (n - 1) as f64) / (n - 1) as f64
}

/// Continuation slopes and the resulting labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub labels: [PlaneLabel; 2],
    /// `d alpha3 / d alpha1` and `d alpha4 / d alpha2`; `None` when the branch
    /// was lost at a perturbed front pair.
    pub slopes: [Option<f64>; 2],
}

impl Classification {
    pub fn branch_lost(&self) -> bool {
        self.slopes.iter().any(Option::is_none)
    }
}

/// Roots at the front pairs displaced by `+-step` along each axis.
struct Neighbours {
    /// `[axis][0 = minus, 1 = plus]`
    roots: [[Option<Vec<[f64; 2]>>; 2]; 2],
    step: f64,
}

impl Neighbours {
    fn solve(front: FrontPair, step: f64, cfg: &SolverConfig) -> Self {
        let lim = FRAC_PI_2 + cfg.domain_slack;
        let shifted = |axis: usize, sign: f64| {
            let mut fp = front;
            if axis == 0 {
                fp.alpha1 += sign * step;
            } else {
                fp.alpha2 += sign * step;
            }
            let inside = fp.alpha1.abs() <= lim && fp.alpha2.abs() <= lim;
            inside.then(|| find_rear_roots(fp, cfg))
        };
        Self {
            roots: [[shifted(0, -1.0), shifted(0, 1.0)], [shifted(1, -1.0), shifted(1, 1.0)]],
            step,
        }
    }

    fn slope(&self, axis: usize, root: [f64; 2], radius: f64) -> Option<f64> {
        let nearest = |side: &Option<Vec<[f64; 2]>>| -> Option<Option<f64>> {
            // outer None: side outside the domain; inner None: branch lost
            side.as_ref().map(|roots| {
                roots
                    .iter()
                    .map(|r| (dist(*r, root), r[axis]))
                    .filter(|(d, _)| *d <= radius)
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(_, v)| v)
            })
        };
        let lo = nearest(&self.roots[axis][0]);
        let hi = nearest(&self.roots[axis][1]);
        let x = root[axis];
        match (lo, hi) {
            (Some(l), Some(h)) => Some((h? - l?) / (2.0 * self.step)),
            (None, Some(h)) => Some((h? - x) / self.step),
            (Some(l), None) => Some((x - l?) / self.step),
            (None, None) => None,
        }
    }

    fn classify(&self, root: [f64; 2], cfg: &SolverConfig) -> Classification {
        let slopes = [
            self.slope(0, root, cfg.match_radius),
            self.slope(1, root, cfg.match_radius),
        ];
        Classification {
            labels: [
                PlaneLabel::from_slope(slopes[0], cfg.slope_threshold),
                PlaneLabel::from_slope(slopes[1], cfg.slope_threshold),
            ],
            slopes,
        }
    }
}

/// Labels one root by the continuation slope of `alpha3` in `alpha1` and of
/// `alpha4` in `alpha2`, re-solving at `alpha1 +- step` (`alpha2 +- step`) and
/// matching the nearest root. One-sided differences are used at the domain
/// boundary. A lost branch labels that angle `?`.
pub fn classify_root(front: FrontPair, root: [f64; 2], step: f64, cfg: &SolverConfig) -> Classification {
    Neighbours::solve(front, step, cfg).classify(root, cfg)
}

pub(crate) fn label_all(
    front: FrontPair,
    rears: &[[f64; 2]],
    cfg: &SolverConfig,
) -> Vec<(LabeledRoot, Classification)> {
    if rears.is_empty() {
        return Vec::new();
    }
    let nb = Neighbours::solve(front, cfg.classify_step, cfg);
    rears
        .iter()
        .map(|r| {
            let class = nb.classify(*r, cfg);
            (assemble(front, *r, class.labels), class)
        })
        .collect()
}

pub(crate) fn assemble(front: FrontPair, rear: [f64; 2], labels: [PlaneLabel; 2]) -> LabeledRoot {
    let g = GaitPoint {
        alpha1: front.alpha1,
        alpha2: front.alpha2,
        alpha3: rear[0],
        alpha4: rear[1],
    };
    LabeledRoot {
        alpha3: rear[0],
        alpha4: rear[1],
        labels,
        r_value: eval_r(&g),
        residual: surface_residual(&g),
    }
}

/// All labelled roots of the surface equations at `front`, sorted by
/// `(alpha3, alpha4)`.
pub fn solve_rear_angles(front: FrontPair, cfg: &SolverConfig) -> Result<Vec<LabeledRoot>, Error> {
    let rears = find_rear_roots(front, cfg);
    if rears.is_empty() {
        return Err(Error::NoConvergence {
            alpha1: front.alpha1,
            alpha2: front.alpha2,
        });
    }
    Ok(label_all(front, &rears, cfg).into_iter().map(|(r, _)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> f64 {
        libm::atan(1.0 / 2.88)
    }

    #[test]
    fn origin_has_identity_and_offset_roots() {
        let cfg = SolverConfig::default();
        let roots = solve_rear_angles(FrontPair::new(0.0, 0.0).unwrap(), &cfg).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].alpha3.abs() < 1e-12 && roots[0].alpha4.abs() < 1e-12);
        assert!((roots[1].alpha3 - k()).abs() < 1e-10);
        assert!((roots[1].alpha4 + k()).abs() < 1e-10);
        assert!((roots[1].alpha3 - 0.33411).abs() < 1e-3);
        for r in &roots {
            assert!(r.residual <= 1e-10);
        }
        assert_eq!(roots[0].labels, [PlaneLabel::Plus, PlaneLabel::Plus]);
        assert_eq!(roots[1].labels, [PlaneLabel::Minus, PlaneLabel::Minus]);
    }

    #[test]
    fn corner_has_five_roots() {
        let cfg = SolverConfig::default();
        let roots = find_rear_roots(FrontPair::new(FRAC_PI_2, FRAC_PI_2).unwrap(), &cfg);
        assert_eq!(roots.len(), 5, "{roots:?}");
        let a = libm::atan(2.88);
        assert!(roots
            .iter()
            .any(|r| (r[0] + a).abs() < 1e-10 && (r[1] - a).abs() < 1e-10));
    }

    #[test]
    fn identity_slopes_are_unit() {
        let cfg = SolverConfig::default();
        let fp = FrontPair::new(0.0, 0.0).unwrap();
        let c = classify_root(fp, [0.0, 0.0], PI / 64.0, &cfg);
        let s = c.slopes;
        assert!((s[0].unwrap() - 1.0).abs() < 1e-9);
        assert!((s[1].unwrap() - 1.0).abs() < 1e-9);
        assert!(!c.branch_lost());
    }

    #[test]
    fn slope_thresholds() {
        assert_eq!(PlaneLabel::from_slope(Some(0.06), 0.05), PlaneLabel::Plus);
        assert_eq!(PlaneLabel::from_slope(Some(-0.06), 0.05), PlaneLabel::Minus);
        assert_eq!(PlaneLabel::from_slope(Some(0.04), 0.05), PlaneLabel::Intersection);
        assert_eq!(PlaneLabel::from_slope(None, 0.05), PlaneLabel::Intersection);
    }

    #[test]
    fn lost_branch_labels_intersection() {
        // a point that is not a root at all has no neighbour within a tiny radius
        let cfg = SolverConfig {
            match_radius: 1e-3,
            ..SolverConfig::default()
        };
        let c = classify_root(FrontPair::new(0.2, 0.1).unwrap(), [1.0, -1.0], PI / 64.0, &cfg);
        assert!(c.branch_lost());
        assert_eq!(c.labels, [PlaneLabel::Intersection; 2]);
    }

    #[test]
    fn dedup_is_idempotent_and_sorted() {
        let pts = alloc::vec![[0.5, 0.1], [0.1, 0.2], [0.1 + 1e-8, 0.2], [-0.3, 0.0], [0.5, 0.1]];
        let once = dedup_roots(pts, 1e-6);
        assert_eq!(once.len(), 3);
        assert_eq!(once[0], [-0.3, 0.0]);
        assert_eq!(dedup_roots(once.clone(), 1e-6), once);
    }

    #[test]
    fn grid_coordinates_are_exact_at_anchors() {
        assert_eq!(grid_coord(0, 17), -FRAC_PI_2);
        assert_eq!(grid_coord(8, 17), 0.0);
        assert_eq!(grid_coord(16, 17), FRAC_PI_2);
        assert!((grid_coord(1, 17) - (-FRAC_PI_2 + PI / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SolverConfig {
            residual_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }
}
