mod common;

use std::f64::consts::PI;

use common::*;
use tiltgait_core::gait::{gait_from_points, Direction};
use tiltgait_core::singularity::surface_residual;
use tiltgait_core::*;

fn defaults() -> (SolverConfig, ValidationConfig) {
    (SolverConfig::default(), ValidationConfig::default())
}

#[test]
fn gait4_continuation_stays_on_identity() {
    let (solver, v) = defaults();
    let spec = gait4_spec();
    let path: Vec<FrontPair> = spec.perimeter().iter().map(|(_, f)| *f).collect();
    let start = [path[0].alpha1, path[0].alpha2];
    let branch = continue_branch(&path, start, &solver, v.continuity_bound).unwrap();
    for (f, r) in path.iter().zip(&branch) {
        assert!((r.alpha3 - f.alpha1).abs() <= 1e-8 && (r.alpha4 - f.alpha2).abs() <= 1e-8);
        assert!(r.r_value > 0.0);
    }
}

#[test]
fn gait1_continuation_passes_printed_vertices() {
    let (solver, v) = defaults();
    let spec = gait1_spec(BranchChoice::Color(ColorChoice::Blue));
    let mut path: Vec<FrontPair> = spec.perimeter().iter().map(|(_, f)| *f).collect();
    // start from the corner (5pi/16, pi/8)
    let first = path
        .iter()
        .position(|f| f.alpha1 == 5.0 * PI / 16.0 && f.alpha2 == PI / 8.0)
        .unwrap();
    path.rotate_left(first);
    let branch = continue_branch(&path, [-0.648, -0.727], &solver, v.continuity_bound).unwrap();
    let (_, verts) = printed_vertices()[0];
    for vx in verts {
        let k = path
            .iter()
            .position(|f| f.alpha1 == vx[0] && f.alpha2 == vx[1])
            .unwrap();
        let r = branch[k];
        assert!(
            (r.alpha3 - vx[2]).abs() <= 5e-3 && (r.alpha4 - vx[3]).abs() <= 5e-3,
            "{vx:?} vs {r:?}"
        );
    }
}

#[test]
fn rectangle_gaits_are_periodic_and_sign_constant() {
    let (solver, v) = defaults();
    for (k, spec) in reference_gaits().iter().enumerate() {
        let g = rectangle_gait(spec, &solver, &v).unwrap();
        assert_eq!(g.samples.len(), 128);
        assert!(g.closed);
        assert!(g.max_surface_residual() <= 1e-10);
        let signs: Vec<bool> = g.points().map(|p| eval_r(&p) < 0.0).collect();
        assert!(signs.iter().all(|s| *s == (k < 3)), "gait {}", k + 1);
        // wrap-around continuation lands back on the first sample
        let last = g.samples.last().unwrap().point;
        let first = g.samples[0].point;
        let fp = FrontPair::new(first.alpha1, first.alpha2).unwrap();
        let back = tiltgait_core::solver::newton_rear(fp, [last.alpha3, last.alpha4], &solver).unwrap();
        assert!((back[0] - first.alpha3).abs() <= 1e-8 && (back[1] - first.alpha4).abs() <= 1e-8);
    }
}

#[test]
fn rectangle_vertices_match_printed_values() {
    let (solver, v) = defaults();
    for (spec, (name, printed)) in reference_gaits().iter().zip(printed_vertices()) {
        let g = rectangle_gait(spec, &solver, &v).unwrap();
        let verts = gait_vertices(&g);
        assert_eq!(verts.len(), 4, "{name}");
        for p in printed {
            assert!(
                verts
                    .iter()
                    .any(|q| q.to_array().iter().zip(&p).all(|(a, b)| (a - b).abs() <= 5e-3)),
                "{name}: {p:?} not among {verts:?}"
            );
        }
    }
}

#[test]
fn gait2_rectangle_is_valid_in_either_colour() {
    let (solver, v) = defaults();
    let blue = rectangle_gait(&gait23_spec("g", BranchChoice::Color(ColorChoice::Blue)), &solver, &v).unwrap();
    let red = rectangle_gait(&gait23_spec("g", BranchChoice::Color(ColorChoice::Red)), &solver, &v).unwrap();
    assert!(blue.validate(Some(ColorChoice::Blue), &solver, &v).unwrap().valid);
    assert!(red.validate(Some(ColorChoice::Red), &solver, &v).unwrap().valid);
    // the red lift of this rectangle is the identity branch
    for p in red.points() {
        assert!((p.alpha3 - p.alpha1).abs() <= 1e-8 && (p.alpha4 - p.alpha2).abs() <= 1e-8);
    }
}

#[test]
fn blue_branch_has_the_closed_form_offset() {
    let (solver, v) = defaults();
    let k = branch_offset();
    let g = rectangle_gait(&gait1_spec(BranchChoice::Color(ColorChoice::Blue)), &solver, &v).unwrap();
    for p in g.points() {
        assert!((p.alpha3 - (k - p.alpha1)).abs() <= 1e-9);
        assert!((p.alpha4 - (-k - p.alpha2)).abs() <= 1e-9);
    }
}

#[test]
fn clockwise_rectangle_visits_the_same_vertices() {
    let (solver, v) = defaults();
    let mut spec = gait4_spec();
    let ccw = gait_vertices(&rectangle_gait(&spec, &solver, &v).unwrap());
    spec.direction = Direction::Clockwise;
    let cw = gait_vertices(&rectangle_gait(&spec, &solver, &v).unwrap());
    assert_eq!(ccw.len(), cw.len());
    for (a, b) in ccw.iter().zip(&cw) {
        for (x, y) in a.to_array().iter().zip(b.to_array()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn biased_gait_leaves_the_surface() {
    let (solver, v) = defaults();
    let g = rectangle_gait(&reference_gaits()[2], &solver, &v).unwrap();
    let b = bias_gait(&g, BiasSpec::new(0.8).unwrap());
    assert_eq!(b.name, "gait3-biased");
    assert!(b.points().any(|p| surface_residual(&p) > 1e-3));
    assert!(BiasSpec::new(1.0).is_err());
    assert!(BiasSpec::new(0.0).is_err());
}

#[test]
fn circle_on_identity_has_no_vertices() {
    let n = 64;
    let pts: Vec<GaitPoint> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64 + 0.1;
            GaitPoint::identity(0.5 * t.cos(), 0.5 * t.sin()).unwrap()
        })
        .collect();
    let g = gait_from_points("circle", 1.0, pts).unwrap();
    assert!(gait_vertices(&g).is_empty());
}

#[test]
fn condition_on_the_surface_reduces_to_r_times_cosines() {
    let (solver, v) = defaults();
    let mut r = rng(5);
    for spec in reference_gaits() {
        let g = rectangle_gait(&spec, &solver, &v).unwrap();
        for s in g.samples.iter().step_by(9) {
            let rr = eval_r(&s.point);
            for _ in 0..20 {
                let (phi, theta) = (random_angle(&mut r), random_angle(&mut r));
                let f = eval_full_condition(&s.point, Attitude { phi, theta });
                assert!((f - rr * phi.cos() * theta.cos()).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn on_surface_gaits_have_no_singular_attitudes() {
    let (solver, v) = defaults();
    let grid = AttitudeGrid::with_resolution(201).unwrap();
    for spec in reference_gaits() {
        let g = rectangle_gait(&spec, &solver, &v).unwrap();
        let union = gait_singular_union(&g, 16, &grid).unwrap();
        assert!(union.is_empty(), "{}", g.name);
        assert_eq!(robustness_margin(&union), RobustnessMargin::Unbounded);
    }
}

#[test]
fn printed_gait1_vertices_have_singular_attitudes() {
    // three-decimal vertices sit about 1e-3 off the surface, which dominates
    // the small R of gait 1
    let grid = AttitudeGrid::with_resolution(201).unwrap();
    for v in printed_vertices()[0].1 {
        let c = singular_locus(&GaitPoint::from_array(v).unwrap(), &grid);
        assert!(!c.is_empty(), "{v:?}");
    }
}

#[test]
fn single_polyline_margin() {
    use tiltgait_core::attitude::{ContourSource, Polyline};
    let c = ContourSet {
        polylines: vec![Polyline {
            points: vec![Attitude { phi: 0.5, theta: 0.0 }, Attitude { phi: 0.7, theta: 0.3 }],
            sample: None,
        }],
        gait: None,
        source: ContourSource::Point,
        resolution: 3,
    };
    let m = robustness_margin(&c);
    assert_eq!(m.value(), 0.5);
    assert_eq!(m.attained_at(), Some(Attitude { phi: 0.5, theta: 0.0 }));
}
