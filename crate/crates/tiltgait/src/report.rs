//! Human-readable summaries printed by the command-line tool.

use std::fmt::Write as _;

use tiltgait_core::atlas::{TriangleCheck, TriangleReport};
use tiltgait_core::{GaitPoint, LabeledRoot, SurfaceAtlas};

use crate::io::{labels_text, MarginsReport, ValidationRecord};

/// Root counts laid out as the grid: rows are `alpha1` indices, columns
/// `alpha2` indices.
pub fn root_count_table(atlas: &SurfaceAtlas) -> String {
    let counts = atlas.root_counts();
    let mut out = String::from("root counts (rows: alpha1 index, columns: alpha2 index)\n");
    out.push_str("     ");
    for j in 0..atlas.grid.n {
        let _ = write!(out, "{j:>3}");
    }
    out.push('\n');
    for (i, row) in counts.iter().enumerate() {
        let _ = write!(out, "{i:>3}: ");
        for c in row {
            let _ = write!(out, "{c:>3}");
        }
        out.push('\n');
    }
    let mut hist = std::collections::BTreeMap::new();
    for c in counts.iter().flatten() {
        *hist.entry(*c).or_insert(0usize) += 1;
    }
    let parts: Vec<String> = hist.iter().map(|(c, n)| format!("{n} nodes with {c} roots")).collect();
    let _ = writeln!(out, "{}", parts.join(", "));
    out
}

fn triangle_line(name: &str, t: &TriangleCheck) -> String {
    format!(
        "{name}: {} interior nodes, {} inside with root, {} inside without root {:?}, {} outside with root, {} outside \
         without root",
        t.interior_points,
        t.inside_with_root,
        t.inside_without_root.len(),
        t.inside_without_root,
        t.outside_with_root.len(),
        t.outside_without_root
    )
}

pub fn triangle_summary(rep: &TriangleReport, atlas: &SurfaceAtlas) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", triangle_line("R > 0 triangle", &rep.positive));
    let _ = writeln!(out, "{}", triangle_line("R < 0 triangle", &rep.negative));
    match rep.origin {
        Some(o) => {
            let _ = writeln!(
                out,
                "origin: max R {:.6}, positive root {}, inside R > 0 triangle {}{}",
                o.max_r,
                o.has_positive_root,
                o.inside_positive_triangle,
                if o.flagged() {
                    "  [flagged: positive R outside the claimed triangle]"
                } else {
                    ""
                }
            );
        }
        None => out.push_str("origin: not a grid node\n"),
    }
    let disc = atlas.label_discrepancies();
    let _ = writeln!(out, "label discrepancies ((+,-) or (-,+)): {}", disc.len());
    for d in disc {
        let p = atlas.point(d.i, d.j);
        let _ = writeln!(
            out,
            "  node ({}, {}) at ({:.6}, {:.6}): root ({:.6}, {:.6}) labelled {}",
            d.i,
            d.j,
            p.front.alpha1,
            p.front.alpha2,
            d.root.alpha3,
            d.root.alpha4,
            labels_text(d.root.labels)
        );
    }
    let failures: Vec<String> = atlas
        .failures()
        .map(|p| {
            format!(
                "  node ({}, {}): {}",
                p.i,
                p.j,
                p.failure.as_ref().expect("failed node")
            )
        })
        .collect();
    let _ = writeln!(out, "solver failures: {}", failures.len());
    for f in failures {
        let _ = writeln!(out, "{f}");
    }
    out
}

pub fn roots_table(roots: &[LabeledRoot]) -> String {
    let mut out = format!(
        "{:>12} {:>12} {:>7} {:>14} {:>10}\n",
        "alpha3", "alpha4", "labels", "R", "residual"
    );
    for r in roots {
        let _ = writeln!(
            out,
            "{:>12.6} {:>12.6} {:>7} {:>14.6e} {:>10.2e}",
            r.alpha3,
            r.alpha4,
            labels_text(r.labels),
            r.r_value,
            r.residual
        );
    }
    out
}

pub fn validation_summary(rec: &ValidationRecord) -> String {
    let mut out = format!(
        "gait {}: {} (colour {}, closure {}, sign of R {}{}, max jump ratio {:.4})\n",
        rec.gait,
        if rec.valid { "VALID" } else { "INVALID" },
        rec.color.as_deref().unwrap_or("any"),
        match rec.closure_ok {
            Some(true) => "ok",
            Some(false) => "broken",
            None => "open path",
        },
        if rec.sign_constant { "constant" } else { "changes" },
        rec.r_sign.as_deref().map(|s| format!(", {s}")).unwrap_or_default(),
        rec.max_jump_ratio
    );
    for v in &rec.violations {
        if v.i == v.j {
            let _ = writeln!(out, "  {} at sample {} {}", v.rule, v.i, v.labels_i);
        } else {
            let _ = writeln!(
                out,
                "  {} between samples {} {} and {} {}",
                v.rule, v.i, v.labels_i, v.j, v.labels_j
            );
        }
    }
    out
}

pub fn vertices_table(verts: &[GaitPoint]) -> String {
    let mut out = format!("{} vertices\n", verts.len());
    for v in verts {
        let a = v.to_array();
        let _ = writeln!(out, "({:.4}, {:.4}, {:.3}, {:.3})", a[0], a[1], a[2], a[3]);
    }
    out
}

pub fn margins_summary(rep: &MarginsReport) -> String {
    let mut out = String::new();
    for g in &rep.gaits {
        match (g.margin, g.attained_at) {
            (Some(m), Some(at)) => {
                let _ = writeln!(
                    out,
                    "{}: margin {m:.6} rad at (phi, theta) = ({:.6}, {:.6}); {} polylines",
                    g.gait, at[0], at[1], g.polylines
                );
            }
            _ => {
                let _ = writeln!(out, "{}: margin unbounded (no singular attitude on the grid)", g.gait);
            }
        }
    }
    if let Some(b) = rep.first_not_smaller {
        let diff = rep
            .difference
            .map(|d| format!("{d:.6}"))
            .unwrap_or_else(|| "unbounded".into());
        let _ = writeln!(
            out,
            "difference {diff}; first margin {} the second",
            if b { ">=" } else { "<" }
        );
    }
    out
}
