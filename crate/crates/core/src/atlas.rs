//! Grid sweep over the front pairs and the derived maps.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::colormap::ColorChoice;
use crate::error::Error;
use crate::solver::{find_rear_roots, grid_coord, label_all, FrontPair, LabeledRoot, PlaneLabel, SolverConfig};

/// `n` evenly spaced values per axis on `[-pi/2, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n: 17 }
    }
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points per axis, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn spacing(&self) -> f64 {
        PI / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        grid_coord(i, self.n)
    }

    pub fn front(&self, i: usize, j: usize) -> FrontPair {
        FrontPair::unchecked(self.coord(i), self.coord(j))
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i > 0 && j > 0 && i + 1 < self.n && j + 1 < self.n
    }

    pub fn is_corner(&self, i: usize, j: usize) -> bool {
        (i == 0 || i + 1 == self.n) && (j == 0 || j + 1 == self.n)
    }
}

/// Solved roots at one grid node. `i` indexes `alpha1`, `j` indexes `alpha2`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasPoint {
    pub i: usize,
    pub j: usize,
    pub front: FrontPair,
    pub roots: Vec<LabeledRoot>,
    /// Roots whose labelling lost the branch at a perturbed front pair.
    pub lost_branches: usize,
    pub failure: Option<Error>,
}

impl AtlasPoint {
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceAtlas {
    pub grid: GridSpec,
    /// Row-major: `alpha1` index outer, `alpha2` index inner.
    pub points: Vec<AtlasPoint>,
}

/// A root carrying a label pair that should not occur.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelDiscrepancy {
    pub i: usize,
    pub j: usize,
    pub root: LabeledRoot,
}

impl SurfaceAtlas {
    /// Orders points by grid index, whatever order they were produced in.
    pub fn from_points(grid: GridSpec, mut points: Vec<AtlasPoint>) -> Self {
        points.sort_by_key(|p| (p.i, p.j));
        Self { grid, points }
    }

    pub fn point(&self, i: usize, j: usize) -> &AtlasPoint {
        &self.points[i * self.grid.n + j]
    }

    pub fn root_counts(&self) -> Vec<Vec<usize>> {
        (0..self.grid.n)
            .map(|i| (0..self.grid.n).map(|j| self.point(i, j).root_count()).collect())
            .collect()
    }

    /// Roots labelled `(+, -)` or `(-, +)`.
    pub fn label_discrepancies(&self) -> Vec<LabelDiscrepancy> {
        use PlaneLabel::{Minus, Plus};
        self.points
            .iter()
            .flat_map(|p| {
                p.roots.iter().filter_map(move |r| {
                    matches!(r.labels, [Plus, Minus] | [Minus, Plus]).then_some(LabelDiscrepancy {
                        i: p.i,
                        j: p.j,
                        root: *r,
                    })
                })
            })
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &AtlasPoint> {
        self.points.iter().filter(|p| p.failure.is_some())
    }
}

/// Solves and labels one grid node. Failures are recorded on the point.
pub fn solve_grid_point(grid: GridSpec, i: usize, j: usize, cfg: &SolverConfig) -> AtlasPoint {
    let front = grid.front(i, j);
    let rears = find_rear_roots(front, cfg);
    if rears.is_empty() {
        return AtlasPoint {
            i,
            j,
            front,
            roots: Vec::new(),
            lost_branches: 0,
            failure: Some(Error::NoConvergence {
                alpha1: front.alpha1,
                alpha2: front.alpha2,
            }),
        };
    }
    let labelled = label_all(front, &rears, cfg);
    let lost_branches = labelled.iter().filter(|(_, c)| c.branch_lost()).count();
    AtlasPoint {
        i,
        j,
        front,
        roots: labelled.into_iter().map(|(r, _)| r).collect(),
        lost_branches,
        failure: None,
    }
}

/// Sequential sweep over every grid node.
pub fn sweep_grid(grid: GridSpec, cfg: &SolverConfig) -> SurfaceAtlas {
    let points = (0..grid.n)
        .flat_map(|i| (0..grid.n).map(move |j| (i, j)))
        .map(|(i, j)| solve_grid_point(grid, i, j, cfg))
        .collect();
    SurfaceAtlas::from_points(grid, points)
}

/// Colours available at one node among its roots with `R < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorAvailability {
    pub red: bool,
    pub blue: bool,
    /// Label pairs of negative-R roots that are neither `(+,+)` nor `(-,-)`.
    pub other: Vec<[PlaneLabel; 2]>,
}

impl ColorAvailability {
    pub fn of_roots(roots: &[LabeledRoot]) -> Self {
        let mut out = Self::default();
        for r in roots.iter().filter(|r| r.r_value < 0.0) {
            match ColorChoice::of_labels(r.labels) {
                Some(ColorChoice::Red) => out.red = true,
                Some(ColorChoice::Blue) => out.blue = true,
                None => out.other.push(r.labels),
            }
        }
        out
    }

    pub fn colors(&self) -> Vec<ColorChoice> {
        let mut v = Vec::new();
        if self.red {
            v.push(ColorChoice::Red);
        }
        if self.blue {
            v.push(ColorChoice::Blue);
        }
        v
    }

    pub fn is_empty(&self) -> bool {
        !self.red && !self.blue && self.other.is_empty()
    }
}

/// Colour availability per atlas point, in atlas order.
pub fn paint_map(atlas: &SurfaceAtlas) -> Vec<ColorAvailability> {
    atlas
        .points
        .iter()
        .map(|p| ColorAvailability::of_roots(&p.roots))
        .collect()
}

/// Sign of `R` a triangle claim is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RSign {
    Positive,
    Negative,
}

impl RSign {
    pub fn matches(self, r: f64) -> bool {
        match self {
            RSign::Positive => r > 0.0,
            RSign::Negative => r < 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub vertices: [FrontPair; 3],
}

impl Triangle {
    /// Closed triangle membership with tolerance `tol`.
    pub fn contains(&self, p: FrontPair, tol: f64) -> bool {
        let [a, b, c] = self.vertices;
        let cross = |o: FrontPair, u: FrontPair, v: FrontPair| {
            (u.alpha1 - o.alpha1) * (v.alpha2 - o.alpha2) - (u.alpha2 - o.alpha2) * (v.alpha1 - o.alpha1)
        };
        let area = cross(a, b, c);
        let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
        let scale = area.abs().max(f64::MIN_POSITIVE);
        let tol = tol * scale;
        if area > 0.0 {
            d1 >= -tol && d2 >= -tol && d3 >= -tol
        } else {
            d1 <= tol && d2 <= tol && d3 <= tol
        }
    }
}

/// Region claimed to carry the positive-R roots.
pub fn positive_r_triangle() -> Triangle {
    let s = PI / 16.0;
    Triangle {
        vertices: [
            FrontPair::unchecked(-7.0 * s, 7.0 * s),
            FrontPair::unchecked(-7.0 * s, -5.0 * s),
            FrontPair::unchecked(5.0 * s, 7.0 * s),
        ],
    }
}

/// Region claimed to carry the negative-R roots.
pub fn negative_r_triangle() -> Triangle {
    let s = PI / 8.0;
    Triangle {
        vertices: [
            FrontPair::unchecked(-3.0 * s, -3.0 * s),
            FrontPair::unchecked(3.0 * s, 3.0 * s),
            FrontPair::unchecked(3.0 * s, -3.0 * s),
        ],
    }
}

/// Computed sign map against one triangle claim, over interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleCheck {
    pub sign: RSign,
    pub triangle: Triangle,
    pub interior_points: usize,
    pub inside_with_root: usize,
    /// Inside the triangle but no root of the claimed sign.
    pub inside_without_root: Vec<(usize, usize)>,
    /// Root of the claimed sign found outside the triangle.
    pub outside_with_root: Vec<(usize, usize)>,
    pub outside_without_root: usize,
}

impl TriangleCheck {
    pub fn agrees(&self) -> bool {
        self.inside_without_root.is_empty() && self.outside_with_root.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        self.inside_with_root
            + self.inside_without_root.len()
            + self.outside_with_root.len()
            + self.outside_without_root
            == self.interior_points
    }
}

/// The zero front pair, where the identity root gives `R = 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginCheck {
    pub max_r: f64,
    pub has_positive_root: bool,
    pub inside_positive_triangle: bool,
}

impl OriginCheck {
    pub fn flagged(&self) -> bool {
        self.has_positive_root && !self.inside_positive_triangle
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleReport {
    pub positive: TriangleCheck,
    pub negative: TriangleCheck,
    /// Present when the grid has a node at the origin.
    pub origin: Option<OriginCheck>,
}

impl TriangleReport {
    pub fn is_consistent(&self) -> bool {
        self.positive.is_consistent() && self.negative.is_consistent()
    }
}

const TRIANGLE_TOL: f64 = 1e-9;

fn check_triangle(atlas: &SurfaceAtlas, sign: RSign, triangle: Triangle) -> TriangleCheck {
    let mut out = TriangleCheck {
        sign,
        triangle,
        interior_points: 0,
        inside_with_root: 0,
        inside_without_root: Vec::new(),
        outside_with_root: Vec::new(),
        outside_without_root: 0,
    };
    for p in atlas.points.iter().filter(|p| atlas.grid.is_interior(p.i, p.j)) {
        out.interior_points += 1;
        let has = p.roots.iter().any(|r| sign.matches(r.r_value));
        match (triangle.contains(p.front, TRIANGLE_TOL), has) {
            (true, true) => out.inside_with_root += 1,
            (true, false) => out.inside_without_root.push((p.i, p.j)),
            (false, true) => out.outside_with_root.push((p.i, p.j)),
            (false, false) => out.outside_without_root += 1,
        }
    }
    out
}

/// Compares the computed sign of `R` against the two triangle claims.
pub fn triangle_report(atlas: &SurfaceAtlas) -> TriangleReport {
    let pos = positive_r_triangle();
    let origin = (atlas.grid.n % 2 == 1).then(|| {
        let mid = atlas.grid.n / 2;
        let p = atlas.point(mid, mid);
        let max_r = p.roots.iter().map(|r| r.r_value).fold(f64::NEG_INFINITY, f64::max);
        OriginCheck {
            max_r,
            has_positive_root: max_r > 0.0,
            inside_positive_triangle: pos.contains(p.front, TRIANGLE_TOL),
        }
    });
    TriangleReport {
        positive: check_triangle(atlas, RSign::Positive, pos),
        negative: check_triangle(atlas, RSign::Negative, negative_r_triangle()),
        origin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::PlaneLabel::{Intersection, Minus, Plus};

    fn root(labels: [PlaneLabel; 2], r_value: f64) -> LabeledRoot {
        LabeledRoot {
            alpha3: 0.0,
            alpha4: 0.0,
            labels,
            r_value,
            residual: 0.0,
        }
    }

    #[test]
    fn painting_rules() {
        let both = ColorAvailability::of_roots(&[root([Plus, Plus], -1.0), root([Minus, Minus], -0.1)]);
        assert_eq!(both.colors(), alloc::vec![ColorChoice::Red, ColorChoice::Blue]);
        let blue = ColorAvailability::of_roots(&[root([Plus, Plus], 2.0), root([Minus, Minus], -0.1)]);
        assert_eq!(blue.colors(), alloc::vec![ColorChoice::Blue]);
        let none = ColorAvailability::of_roots(&[root([Plus, Plus], 2.0)]);
        assert!(none.is_empty());
        let odd = ColorAvailability::of_roots(&[root([Intersection, Minus], -1.0)]);
        assert_eq!(odd.other, alloc::vec![[Intersection, Minus]]);
        assert!(odd.colors().is_empty());
    }

    #[test]
    fn triangle_membership() {
        let t = positive_r_triangle();
        assert!(!t.contains(FrontPair::unchecked(0.0, 0.0), 1e-9));
        assert!(t.contains(FrontPair::unchecked(-7.0 * PI / 16.0, 0.0), 1e-9));
        assert!(t.contains(FrontPair::unchecked(-PI / 4.0, PI / 4.0), 1e-9));
        let n = negative_r_triangle();
        assert!(n.contains(FrontPair::unchecked(0.0, 0.0), 1e-9));
        assert!(n.contains(FrontPair::unchecked(0.3, -0.3), 1e-9));
        assert!(!n.contains(FrontPair::unchecked(-0.3, 0.3), 1e-9));
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec::new(17).unwrap();
        assert!((g.spacing() - PI / 16.0).abs() < 1e-15);
        assert!(g.is_corner(16, 0) && !g.is_corner(16, 3));
        assert!(g.is_interior(1, 15) && !g.is_interior(0, 5));
        assert!(GridSpec::new(1).is_err());
    }

    #[test]
    fn coarse_sweep_counts() {
        let grid = GridSpec::new(5).unwrap();
        let atlas = sweep_grid(grid, &SolverConfig::default());
        for p in &atlas.points {
            let want = if grid.is_corner(p.i, p.j) {
                5
            } else if grid.is_interior(p.i, p.j) {
                2
            } else {
                3
            };
            assert_eq!(p.root_count(), want, "at ({}, {})", p.i, p.j);
        }
        let report = triangle_report(&atlas);
        assert!(report.is_consistent());
        assert!(report.origin.unwrap().flagged());
    }
}
