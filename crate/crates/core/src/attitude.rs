//! Singular attitudes in the roll-pitch square.
//!
//! For a fixed gait point the invertibility condition is a smooth function of
//! `(phi, theta)`; its zero set is traced with marching squares on a regular
//! grid. The distance from zero attitude to the nearest singular attitude is
//! the robustness margin.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::Error;
use crate::gait::Gait;
use crate::singularity::{AttTrig, Attitude, GaitPoint, PreparedCondition};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttitudeGrid {
    resolution: usize,
    margin: f64,
}

impl Default for AttitudeGrid {
    fn default() -> Self {
        Self {
            resolution: 401,
            margin: 1e-6,
        }
    }
}

impl AttitudeGrid {
    /// `resolution` nodes per axis on `[-pi/2 + margin, pi/2 - margin]`; must be
    /// odd so zero attitude is a node.
    pub fn new(resolution: usize, margin: f64) -> Result<Self, Error> {
        if resolution < 3 || resolution.is_multiple_of(2) {
            return Err(Error::InvalidGrid(alloc::format!(
                "attitude resolution {resolution} must be odd and at least 3"
            )));
        }
        if !(0.0..FRAC_PI_2).contains(&margin) {
            return Err(Error::InvalidGrid(alloc::format!(
                "attitude margin {margin} out of range"
            )));
        }
        Ok(Self { resolution, margin })
    }

    pub fn with_resolution(resolution: usize) -> Result<Self, Error> {
        Self::new(resolution, 1e-6)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn half_width(&self) -> f64 {
        FRAC_PI_2 - self.margin
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width() / (self.resolution - 1) as f64
    }

    /// Node coordinate; exact zero at the centre.
    pub fn coord(&self, k: usize) -> f64 {
        let n = self.resolution;
        self.half_width() * ((2 * k) as f64 - (n - 1) as f64) / (n - 1) as f64
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.resolution).map(|k| self.coord(k)).collect()
    }
}

/// Condition values on the grid, `values[i * n + j]` at `(phi_i, theta_j)`,
/// with the sign used for contouring at each node.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub n: usize,
    pub coords: Vec<f64>,
    pub values: Vec<f64>,
    pub negative: Vec<bool>,
}

impl SampledField {
    /// Field whose signs are taken at face value.
    pub fn from_values(n: usize, coords: Vec<f64>, values: Vec<f64>) -> Self {
        let negative = values.iter().map(|v| *v < 0.0).collect();
        Self {
            n,
            coords,
            values,
            negative,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn is_negative(&self, i: usize, j: usize) -> bool {
        self.negative[i * self.n + j]
    }
}

/// Multiple of `eps * sum |term|` below which a computed value has no
/// reliable sign; covers the 31-term sum and the products feeding it.
const SIGN_GUARD: f64 = 64.0 * f64::EPSILON;

/// Samples the full condition for one gait point over the grid.
///
/// On the surface the condition reduces to `R cos(phi) cos(theta)`, which
/// vanishes only at the domain corners and there drowns in rounding. Nodes
/// whose value is within rounding of zero take their sign from the nearest
/// ring of nodes whose sign is certain, so no contour is drawn through
/// rounding noise.
pub fn sample_condition(g: &GaitPoint, grid: &AttitudeGrid) -> SampledField {
    let coords = grid.coords();
    let n = coords.len();
    let trig: Vec<(f64, f64)> = coords.iter().map(|c| libm::sincos(*c)).collect();
    let prep = PreparedCondition::at(g);
    let mut values = Vec::with_capacity(n * n);
    let mut certain = Vec::with_capacity(n * n);
    for &(s_phi, c_phi) in &trig {
        for &(s_theta, c_theta) in &trig {
            let (v, mag) = prep.eval_with_magnitude(&AttTrig {
                s_phi,
                c_phi,
                s_theta,
                c_theta,
            });
            values.push(v);
            certain.push(libm::fabs(v) > SIGN_GUARD * mag);
        }
    }
    let negative = resolve_signs(n, &values, &certain);
    SampledField {
        n,
        coords,
        values,
        negative,
    }
}

fn resolve_signs(n: usize, values: &[f64], certain: &[bool]) -> Vec<bool> {
    let mut negative: Vec<bool> = values.iter().zip(certain).map(|(v, c)| *c && *v < 0.0).collect();
    if certain.iter().all(|c| *c) || !certain.iter().any(|c| *c) {
        return negative;
    }
    for i in 0..n {
        for j in 0..n {
            if certain[i * n + j] {
                continue;
            }
            for r in 1..n {
                let (i0, i1) = (i.saturating_sub(r), (i + r).min(n - 1));
                let (j0, j1) = (j.saturating_sub(r), (j + r).min(n - 1));
                let mut sum = 0.0;
                let mut found = false;
                for p in i0..=i1 {
                    for q in j0..=j1 {
                        let on_ring = p.abs_diff(i) == r || q.abs_diff(j) == r;
                        if on_ring && certain[p * n + q] {
                            sum += values[p * n + q];
                            found = true;
                        }
                    }
                }
                if found {
                    negative[i * n + j] = sum < 0.0;
                    break;
                }
            }
        }
    }
    negative
}

/// Which grid edge a contour point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeId {
    /// Between `(i, j)` and `(i + 1, j)`.
    Phi(usize, usize),
    /// Between `(i, j)` and `(i, j + 1)`.
    Theta(usize, usize),
}

impl EdgeId {
    pub fn nodes(self) -> ((usize, usize), (usize, usize)) {
        match self {
            EdgeId::Phi(i, j) => ((i, j), (i + 1, j)),
            EdgeId::Theta(i, j) => ((i, j), (i, j + 1)),
        }
    }
}

/// Linear interpolation of the zero crossing along edge `e`.
pub fn edge_point(field: &SampledField, e: EdgeId) -> Attitude {
    let ((i0, j0), (i1, j1)) = e.nodes();
    let (v0, v1) = (field.at(i0, j0), field.at(i1, j1));
    // clamped: a node with a resolved sign may carry a value of either sign
    let t = if v0 == v1 {
        0.5
    } else {
        (v0 / (v0 - v1)).clamp(0.0, 1.0)
    };
    let (p0, q0) = (field.coords[i0], field.coords[j0]);
    let (p1, q1) = (field.coords[i1], field.coords[j1]);
    Attitude {
        phi: p0 + t * (p1 - p0),
        theta: q0 + t * (q1 - q0),
    }
}

/// Zero-level polylines of a sampled field, each as the list of grid edges it
/// crosses. Closed loops repeat their first edge at the end. Saddle cells are
/// split by the sign of the mean of the four corners.
pub fn march_edges(field: &SampledField) -> Vec<Vec<EdgeId>> {
    let n = field.n;
    let mut segments: Vec<[EdgeId; 2]> = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let (a, b, c, d) = (
                field.at(i, j),
                field.at(i + 1, j),
                field.at(i + 1, j + 1),
                field.at(i, j + 1),
            );
            let case = field.is_negative(i, j) as u8
                | (field.is_negative(i + 1, j) as u8) << 1
                | (field.is_negative(i + 1, j + 1) as u8) << 2
                | (field.is_negative(i, j + 1) as u8) << 3;
            let e0 = EdgeId::Phi(i, j);
            let e1 = EdgeId::Theta(i + 1, j);
            let e2 = EdgeId::Phi(i, j + 1);
            let e3 = EdgeId::Theta(i, j);
            let centre_negative = (a + b + c + d) * 0.25 < 0.0;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push([e3, e0]),
                2 | 13 => segments.push([e0, e1]),
                3 | 12 => segments.push([e3, e1]),
                4 | 11 => segments.push([e1, e2]),
                6 | 9 => segments.push([e0, e2]),
                7 | 8 => segments.push([e3, e2]),
                5 => {
                    if centre_negative {
                        segments.push([e0, e1]);
                        segments.push([e2, e3]);
                    } else {
                        segments.push([e3, e0]);
                        segments.push([e1, e2]);
                    }
                }
                10 => {
                    if centre_negative {
                        segments.push([e3, e0]);
                        segments.push([e1, e2]);
                    } else {
                        segments.push([e0, e1]);
                        segments.push([e2, e3]);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    chain(&segments)
}

fn chain(segments: &[[EdgeId; 2]]) -> Vec<Vec<EdgeId>> {
    let mut by_edge: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (k, s) in segments.iter().enumerate() {
        by_edge.entry(s[0]).or_default().push(k);
        by_edge.entry(s[1]).or_default().push(k);
    }
    let mut used = alloc::vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start: EdgeId, used: &mut Vec<bool>| {
        let mut line = alloc::vec![start];
        let mut at = start;
        while let Some(&k) = by_edge[&at].iter().find(|&&k| !used[k]) {
            used[k] = true;
            let s = segments[k];
            at = if s[0] == at { s[1] } else { s[0] };
            line.push(at);
        }
        line
    };
    // open chains start at boundary edges touched by a single segment
    let ends: Vec<EdgeId> = by_edge.iter().filter(|(_, v)| v.len() == 1).map(|(e, _)| *e).collect();
    for e in ends {
        if !used[by_edge[&e][0]] {
            out.push(walk(e, &mut used));
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            out.push(walk(segments[k][0], &mut used));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Attitude>,
    /// Gait sample that produced this line, if any.
    pub sample: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourSource {
    Point,
    Sample(usize),
    Union,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub polylines: Vec<Polyline>,
    pub gait: Option<String>,
    pub source: ContourSource,
    pub resolution: usize,
}

impl ContourSet {
    pub fn is_empty(&self) -> bool {
        self.polylines.iter().all(|p| p.points.is_empty())
    }

    pub fn point_count(&self) -> usize {
        self.polylines.iter().map(|p| p.points.len()).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = &Attitude> {
        self.polylines.iter().flat_map(|p| p.points.iter())
    }
}

/// Singular attitudes of one gait point.
pub fn singular_locus(g: &GaitPoint, grid: &AttitudeGrid) -> ContourSet {
    let field = sample_condition(g, grid);
    let polylines = march_edges(&field)
        .into_iter()
        .map(|edges| Polyline {
            points: edges.into_iter().map(|e| edge_point(&field, e)).collect(),
            sample: None,
        })
        .collect();
    ContourSet {
        polylines,
        gait: None,
        source: ContourSource::Point,
        resolution: grid.resolution,
    }
}

/// Gait sample indices used for `time_samples` evenly spaced instants:
/// the sample at or before each instant, without repeats.
pub fn time_sample_indices(sample_count: usize, time_samples: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..time_samples).map(|k| k * sample_count / time_samples).collect();
    out.dedup();
    out
}

/// Locus of gait sample `index`, tagged with that index.
pub fn sample_locus(g: &Gait, index: usize, grid: &AttitudeGrid) -> ContourSet {
    let mut c = singular_locus(&g.samples[index].point, grid);
    for p in &mut c.polylines {
        p.sample = Some(index);
    }
    c.gait = Some(g.name.clone());
    c.source = ContourSource::Sample(index);
    c
}

/// Concatenates per-sample loci in the given order.
pub fn merge_union(gait: &Gait, loci: Vec<ContourSet>, grid: &AttitudeGrid) -> ContourSet {
    ContourSet {
        polylines: loci.into_iter().flat_map(|c| c.polylines).collect(),
        gait: Some(gait.name.clone()),
        source: ContourSource::Union,
        resolution: grid.resolution,
    }
}

/// Union over one period of the singular loci at `time_samples` instants.
pub fn gait_singular_union(g: &Gait, time_samples: usize, grid: &AttitudeGrid) -> Result<ContourSet, Error> {
    if time_samples == 0 {
        return Err(Error::InvalidGrid("need at least one time sample".into()));
    }
    let loci = time_sample_indices(g.samples.len(), time_samples)
        .into_iter()
        .map(|k| sample_locus(g, k, grid))
        .collect();
    Ok(merge_union(g, loci, grid))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RobustnessMargin {
    Bounded {
        value: f64,
        at: Attitude,
    },
    /// No singular attitude on the grid.
    Unbounded,
}

impl RobustnessMargin {
    /// `+inf` when unbounded.
    pub fn value(&self) -> f64 {
        match self {
            RobustnessMargin::Bounded { value, .. } => *value,
            RobustnessMargin::Unbounded => f64::INFINITY,
        }
    }

    pub fn attained_at(&self) -> Option<Attitude> {
        match self {
            RobustnessMargin::Bounded { at, .. } => Some(*at),
            RobustnessMargin::Unbounded => None,
        }
    }
}

/// Smallest distance from zero attitude to any contour point.
pub fn robustness_margin(c: &ContourSet) -> RobustnessMargin {
    let mut best: Option<(f64, Attitude)> = None;
    for p in c.points() {
        let d = p.norm();
        if best.is_none_or(|(b, _)| d < b) {
            best = Some((d, *p));
        }
    }
    match best {
        Some((value, at)) => RobustnessMargin::Bounded { value, at },
        None => RobustnessMargin::Unbounded,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaitComparison {
    pub first: ContourSet,
    pub second: ContourSet,
    pub first_margin: RobustnessMargin,
    pub second_margin: RobustnessMargin,
}

impl GaitComparison {
    pub fn from_contours(first: ContourSet, second: ContourSet) -> Self {
        Self {
            first_margin: robustness_margin(&first),
            second_margin: robustness_margin(&second),
            first,
            second,
        }
    }

    /// First margin minus second; two unbounded margins differ by zero.
    pub fn difference(&self) -> f64 {
        let (a, b) = (self.first_margin.value(), self.second_margin.value());
        if a == b {
            0.0
        } else {
            a - b
        }
    }
}

pub fn compare_gaits(a: &Gait, b: &Gait, grid: &AttitudeGrid, time_samples: usize) -> Result<GaitComparison, Error> {
    Ok(GaitComparison::from_contours(
        gait_singular_union(a, time_samples, grid)?,
        gait_singular_union(b, time_samples, grid)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: usize, f: impl Fn(f64, f64) -> f64) -> SampledField {
        let coords: Vec<f64> = (0..n).map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64).collect();
        let mut values = Vec::new();
        for &p in &coords {
            for &q in &coords {
                values.push(f(p, q));
            }
        }
        SampledField::from_values(n, coords, values)
    }

    #[test]
    fn circle_is_one_closed_loop() {
        let f = field(41, |p, q| p * p + q * q - 0.25);
        let lines = march_edges(&f);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
        for e in l {
            let a = edge_point(&f, *e);
            assert!((a.norm() - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn straight_line_is_open() {
        let f = field(11, |p, _| p - 0.05);
        let lines = march_edges(&f);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 11);
        for e in &lines[0] {
            assert!((edge_point(&f, *e).phi - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn saddle_resolution_is_consistent() {
        // two crossing lines give saddle cells at the crossing
        let f = field(21, |p, q| (p - 0.01) * (q - 0.013));
        let lines = march_edges(&f);
        let total: usize = lines.iter().map(|l| l.len()).sum();
        assert!(lines.len() >= 2);
        assert!(total >= 40);
    }

    #[test]
    fn grid_checks() {
        assert!(AttitudeGrid::with_resolution(400).is_err());
        assert!(AttitudeGrid::with_resolution(1).is_err());
        let g = AttitudeGrid::with_resolution(5).unwrap();
        assert_eq!(g.coord(2), 0.0);
        assert!((g.coord(4) - (FRAC_PI_2 - 1e-6)).abs() < 1e-15);
    }

    #[test]
    fn margin_of_known_line() {
        let c = ContourSet {
            polylines: alloc::vec![Polyline {
                points: alloc::vec![Attitude { phi: 0.5, theta: 0.0 }, Attitude { phi: 0.5, theta: 0.3 }],
                sample: None,
            }],
            gait: None,
            source: ContourSource::Point,
            resolution: 3,
        };
        let m = robustness_margin(&c);
        assert_eq!(m.value(), 0.5);
        assert_eq!(m.attained_at(), Some(Attitude { phi: 0.5, theta: 0.0 }));
        let empty = ContourSet {
            polylines: Vec::new(),
            ..c
        };
        assert_eq!(robustness_margin(&empty), RobustnessMargin::Unbounded);
    }

    #[test]
    fn time_indices() {
        assert_eq!(time_sample_indices(128, 4), alloc::vec![0, 32, 64, 96]);
        assert_eq!(time_sample_indices(2, 5), alloc::vec![0, 1]);
        assert_eq!(time_sample_indices(1, 64), alloc::vec![0]);
    }
}
