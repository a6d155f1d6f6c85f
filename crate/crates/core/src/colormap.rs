//! Two-colour adjacency rules and gait-path certification.
//!
//! A rear angle may not jump between the `+` and `-` planes; it has to pass
//! through the intersection line `?` first. A path on the surface whose
//! neighbouring samples respect this rule (and keep a constant sign of `R`)
//! yields continuous rear angles.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::atlas::RSign;
use crate::error::Error;
use crate::singularity::{eval_r, surface_residual};
use crate::solver::{label_all, newton_rear, FrontPair, LabeledRoot, PlaneLabel, SolverConfig};

use PlaneLabel::{Intersection, Minus, Plus};

/// A label pair other than `(+,-)` and `(-,+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootType([PlaneLabel; 2]);

impl RootType {
    pub const ALL: [RootType; 7] = [
        RootType([Plus, Plus]),
        RootType([Minus, Minus]),
        RootType([Plus, Intersection]),
        RootType([Intersection, Plus]),
        RootType([Minus, Intersection]),
        RootType([Intersection, Minus]),
        RootType([Intersection, Intersection]),
    ];

    pub fn new(labels: [PlaneLabel; 2]) -> Option<Self> {
        match labels {
            [Plus, Minus] | [Minus, Plus] => None,
            l => Some(RootType(l)),
        }
    }

    pub fn labels(self) -> [PlaneLabel; 2] {
        self.0
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorChoice {
    /// `(+, +)` roots.
    Red,
    /// `(-, -)` roots.
    Blue,
}

impl ColorChoice {
    pub fn labels(self) -> [PlaneLabel; 2] {
        match self {
            ColorChoice::Red => [Plus, Plus],
            ColorChoice::Blue => [Minus, Minus],
        }
    }

    pub fn of_labels(labels: [PlaneLabel; 2]) -> Option<Self> {
        match labels {
            [Plus, Plus] => Some(ColorChoice::Red),
            [Minus, Minus] => Some(ColorChoice::Blue),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ColorChoice::Red => "red",
            ColorChoice::Blue => "blue",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "red" => Some(ColorChoice::Red),
            "blue" => Some(ColorChoice::Blue),
            _ => None,
        }
    }

    /// Whether `root` may carry this colour: matching labels and `R < 0`.
    pub fn admits(self, root: &LabeledRoot) -> bool {
        root.labels == self.labels() && root.r_value < 0.0
    }
}

/// Same label, or either side on the intersection line.
pub fn label_adjacency_allowed(a: PlaneLabel, b: PlaneLabel) -> bool {
    a == b || a == Intersection || b == Intersection
}

/// Componentwise [`label_adjacency_allowed`].
pub fn type_adjacency_allowed(a: RootType, b: RootType) -> bool {
    label_adjacency_allowed(a.0[0], b.0[0]) && label_adjacency_allowed(a.0[1], b.0[1])
}

/// One point of a gait path: front pair, chosen rear root and, optionally,
/// the colour the planner committed to there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub front: FrontPair,
    pub root: LabeledRoot,
    pub color: Option<ColorChoice>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    /// Bound on `max(|R_phi|, |R_theta|)` for every sample.
    pub surface_tol: f64,
    /// Discrete continuity modulus, rad of rear motion per rad of front motion.
    pub continuity_bound: f64,
    /// Largest per-axis front step accepted between neighbours.
    pub adjacency_step: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            surface_tol: 1e-8,
            continuity_bound: 10.0,
            adjacency_step: PI / 16.0,
        }
    }
}

const STEP_SLACK: f64 = 1e-12;
const JUMP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Labels `(+,-)` or `(-,+)` at a single sample.
    ForbiddenType,
    /// Neighbouring types violate the adjacency table.
    Adjacency,
    OffSurface,
    /// `R` is zero or has a different sign from the first sample.
    SignChange,
    /// Rear angles moved more than the continuity bound allows.
    Discontinuity,
    /// Root does not carry the declared colour.
    ColorMismatch,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ForbiddenType => "forbidden-type",
            Rule::Adjacency => "adjacency",
            Rule::OffSurface => "off-surface",
            Rule::SignChange => "sign-change",
            Rule::Discontinuity => "discontinuity",
            Rule::ColorMismatch => "color-mismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Sample indices involved; equal for single-sample rules.
    pub indices: (usize, usize),
    pub labels: ([PlaneLabel; 2], [PlaneLabel; 2]),
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Whether the wrap-around pair passes; `None` for open paths.
    pub closure_ok: Option<bool>,
    pub sign_constant: bool,
    /// Sign of `R` at the first sample.
    pub r_sign: Option<RSign>,
    pub max_jump_ratio: f64,
}

/// Certifies a labelled path. Every neighbouring pair (including last to
/// first when `closed`) must keep adjacent types and bounded rear motion;
/// every sample must lie on the surface with the sign of `R` fixed, and
/// match its declared colour.
pub fn validate_gait_path(
    path: &[PathSample],
    closed: bool,
    cfg: &ValidationConfig,
) -> Result<ValidationReport, Error> {
    if path.is_empty() {
        return Err(Error::InvalidGait("empty path".into()));
    }
    let n = path.len();
    let pairs: Vec<(usize, usize)> = (0..n - 1)
        .map(|i| (i, i + 1))
        .chain((closed && n > 1).then_some((n - 1, 0)))
        .collect();
    for &(i, j) in &pairs {
        let step = path[i].front.step_to(&path[j].front);
        if step > cfg.adjacency_step + STEP_SLACK {
            return Err(Error::PathTooCoarse { index: j, step });
        }
    }

    let mut violations = Vec::new();
    let r_first = eval_r(&path[0].root.gait_point(path[0].front));
    let r_sign = if r_first > 0.0 {
        Some(RSign::Positive)
    } else if r_first < 0.0 {
        Some(RSign::Negative)
    } else {
        None
    };
    let mut sign_constant = r_sign.is_some();
    for (i, s) in path.iter().enumerate() {
        let g = s.root.gait_point(s.front);
        let l = s.root.labels;
        let single = |rule| Violation {
            indices: (i, i),
            labels: (l, l),
            rule,
        };
        if RootType::new(l).is_none() {
            violations.push(single(Rule::ForbiddenType));
        }
        if !(surface_residual(&g) <= cfg.surface_tol) {
            violations.push(single(Rule::OffSurface));
        }
        let r = eval_r(&g);
        if !r_sign.is_some_and(|sgn| sgn.matches(r)) {
            sign_constant = false;
            violations.push(single(Rule::SignChange));
        }
        if let Some(c) = s.color {
            if !c.admits(&LabeledRoot { r_value: r, ..s.root }) {
                violations.push(single(Rule::ColorMismatch));
            }
        }
    }

    let mut closure_ok = closed.then_some(true);
    let mut max_jump_ratio: f64 = 0.0;
    for &(i, j) in &pairs {
        let (a, b) = (&path[i], &path[j]);
        let labels = (a.root.labels, b.root.labels);
        let mut pair_ok = true;
        if let (Some(ta), Some(tb)) = (RootType::new(labels.0), RootType::new(labels.1)) {
            if !type_adjacency_allowed(ta, tb) {
                violations.push(Violation {
                    indices: (i, j),
                    labels,
                    rule: Rule::Adjacency,
                });
                pair_ok = false;
            }
        }
        let front_step = a.front.distance(&b.front);
        let jump = libm::hypot(a.root.alpha3 - b.root.alpha3, a.root.alpha4 - b.root.alpha4);
        if front_step > 0.0 {
            max_jump_ratio = max_jump_ratio.max(jump / front_step);
        }
        if jump > cfg.continuity_bound * front_step + JUMP_SLACK {
            violations.push(Violation {
                indices: (i, j),
                labels,
                rule: Rule::Discontinuity,
            });
            pair_ok = false;
        }
        if closed && (i, j) == (n - 1, 0) {
            closure_ok = Some(pair_ok);
        }
    }

    Ok(ValidationReport {
        valid: violations.is_empty(),
        violations,
        closure_ok,
        sign_constant,
        r_sign,
        max_jump_ratio,
    })
}

/// Follows one root along `path` by Newton continuation from the previous
/// sample's root. Returns unlabelled rear angles.
pub fn track_branch(
    path: &[FrontPair],
    initial: [f64; 2],
    cfg: &SolverConfig,
    continuity_bound: f64,
) -> Result<Vec<[f64; 2]>, Error> {
    let lim = core::f64::consts::FRAC_PI_2 + cfg.domain_slack;
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(path.len());
    let mut prev = initial;
    let mut prev_front: Option<FrontPair> = None;
    for (index, fp) in path.iter().enumerate() {
        let x = newton_rear(*fp, prev, cfg).ok_or(Error::NoConvergence {
            alpha1: fp.alpha1,
            alpha2: fp.alpha2,
        })?;
        if x[0].abs() > lim || x[1].abs() > lim {
            return Err(Error::BranchUnavailable { index });
        }
        let x = [
            x[0].clamp(-core::f64::consts::FRAC_PI_2, core::f64::consts::FRAC_PI_2),
            x[1].clamp(-core::f64::consts::FRAC_PI_2, core::f64::consts::FRAC_PI_2),
        ];
        let jump = libm::hypot(x[0] - prev[0], x[1] - prev[1]);
        let allowed = match prev_front {
            Some(pf) => (continuity_bound * pf.distance(fp) + JUMP_SLACK).min(cfg.match_radius),
            // the initial root is only polished
            None => cfg.match_radius,
        };
        if jump > allowed {
            return Err(Error::BranchJump { index, jump });
        }
        out.push(x);
        prev = x;
        prev_front = Some(*fp);
    }
    Ok(out)
}

/// Continuation along `path` from `initial`, each sample labelled by its
/// continuation slopes. Branch switches are errors, never silently accepted.
pub fn continue_branch(
    path: &[FrontPair],
    initial: [f64; 2],
    cfg: &SolverConfig,
    continuity_bound: f64,
) -> Result<Vec<LabeledRoot>, Error> {
    let rears = track_branch(path, initial, cfg, continuity_bound)?;
    Ok(path
        .iter()
        .zip(&rears)
        .map(|(fp, r)| label_all(*fp, core::slice::from_ref(r), cfg).remove(0).0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_rule_table() {
        assert!(label_adjacency_allowed(Plus, Plus));
        assert!(!label_adjacency_allowed(Plus, Minus));
        assert!(!label_adjacency_allowed(Minus, Plus));
        assert!(label_adjacency_allowed(Plus, Intersection));
        assert!(label_adjacency_allowed(Intersection, Minus));
    }

    #[test]
    fn adjacency_symmetric_and_reflexive() {
        for a in RootType::ALL {
            assert!(type_adjacency_allowed(a, a));
            for b in RootType::ALL {
                assert_eq!(type_adjacency_allowed(a, b), type_adjacency_allowed(b, a));
            }
            let q = RootType::new([Intersection, Intersection]).unwrap();
            assert!(type_adjacency_allowed(a, q));
        }
        let red = RootType::new([Plus, Plus]).unwrap();
        let blue = RootType::new([Minus, Minus]).unwrap();
        assert!(!type_adjacency_allowed(red, blue));
        assert!(RootType::new([Plus, Minus]).is_none());
    }

    #[test]
    fn colours() {
        assert_eq!(ColorChoice::parse("Blue"), Some(ColorChoice::Blue));
        assert_eq!(ColorChoice::of_labels([Plus, Plus]), Some(ColorChoice::Red));
        assert_eq!(ColorChoice::of_labels([Plus, Intersection]), None);
    }

    fn sample(a1: f64, a2: f64, rear: [f64; 2], labels: [PlaneLabel; 2]) -> PathSample {
        let front = FrontPair::new(a1, a2).unwrap();
        let g = front.with_rear(rear[0], rear[1]).unwrap();
        PathSample {
            front,
            root: LabeledRoot {
                alpha3: rear[0],
                alpha4: rear[1],
                labels,
                r_value: eval_r(&g),
                residual: surface_residual(&g),
            },
            color: None,
        }
    }

    #[test]
    fn rejects_coarse_paths() {
        let a = sample(0.0, 0.0, [0.0, 0.0], [Plus, Plus]);
        let b = sample(0.5, 0.0, [0.5, 0.0], [Plus, Plus]);
        assert!(matches!(
            validate_gait_path(&[a, b], false, &ValidationConfig::default()),
            Err(Error::PathTooCoarse { index: 1, .. })
        ));
    }

    #[test]
    fn direct_red_to_blue_step_is_invalid() {
        let k = libm::atan(1.0 / 2.88);
        let a = sample(-0.2, 0.1, [-0.2, 0.1], [Plus, Plus]);
        let b = sample(-0.15, 0.1, [k + 0.15, -k - 0.1], [Minus, Minus]);
        let rep = validate_gait_path(&[a, b], false, &ValidationConfig::default()).unwrap();
        assert!(!rep.valid);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.rule == Rule::Adjacency && v.indices == (0, 1)));
    }

    #[test]
    fn constant_path_tracks_constant_root() {
        let cfg = SolverConfig::default();
        let fp = FrontPair::new(0.4, -0.3).unwrap();
        let path = [fp; 5];
        let roots = continue_branch(&path, [0.4, -0.3], &cfg, 10.0).unwrap();
        for r in &roots {
            assert!((r.alpha3 - 0.4).abs() < 1e-12 && (r.alpha4 + 0.3).abs() < 1e-12);
        }
        let samples: Vec<PathSample> = roots
            .iter()
            .map(|r| PathSample {
                front: fp,
                root: *r,
                color: None,
            })
            .collect();
        let rep = validate_gait_path(&samples, true, &ValidationConfig::default()).unwrap();
        assert!(rep.valid, "{rep:?}");
        assert_eq!(rep.closure_ok, Some(true));
    }
}
