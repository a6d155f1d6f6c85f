//! JSON and CSV shapes of atlases, gaits, validation reports and contours.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tiltgait_core::atlas::RSign;
use tiltgait_core::attitude::ContourSource;
use tiltgait_core::gait::{Direction, GaitSample, Provenance};
use tiltgait_core::{
    paint_map, BranchChoice, ColorChoice, ContourSet, Gait, GaitPoint, PlaneLabel, RectangleSpec, RobustnessMargin,
    SurfaceAtlas, ValidationReport,
};

use crate::error::{Error, Result};
use crate::format::{num, round_sig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub alpha3: f64,
    pub alpha4: f64,
    pub label3: String,
    pub label4: String,
    pub r_value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasPointRecord {
    pub i: usize,
    pub j: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub roots: Vec<RootRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasFile {
    pub grid_n: usize,
    pub spacing_rad: f64,
    pub points: Vec<AtlasPointRecord>,
}

impl AtlasFile {
    pub fn from_atlas(atlas: &SurfaceAtlas) -> Self {
        Self {
            grid_n: atlas.grid.n,
            spacing_rad: round_sig(atlas.grid.spacing()),
            points: atlas
                .points
                .iter()
                .map(|p| AtlasPointRecord {
                    i: p.i,
                    j: p.j,
                    alpha1: round_sig(p.front.alpha1),
                    alpha2: round_sig(p.front.alpha2),
                    roots: p
                        .roots
                        .iter()
                        .map(|r| RootRecord {
                            alpha3: round_sig(r.alpha3),
                            alpha4: round_sig(r.alpha4),
                            label3: r.labels[0].symbol().to_owned(),
                            label4: r.labels[1].symbol().to_owned(),
                            r_value: round_sig(r.r_value),
                            residual: round_sig(r.residual),
                        })
                        .collect(),
                    failure: p.failure.as_ref().map(|e| e.to_string()),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub t: f64,
    pub alpha: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub name: String,
    pub alpha1: [f64; 2],
    pub alpha2: [f64; 2],
    /// `ccw` or `cw`.
    pub direction: String,
    pub samples: usize,
    /// `red`, `blue` or `identity`.
    pub branch: String,
    pub period_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceRecord {
    Spec(SpecRecord),
    Bias { of: String, eta: f64 },
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitFile {
    pub name: String,
    pub period_s: f64,
    pub closed: bool,
    pub samples: Vec<SampleRecord>,
    pub provenance: ProvenanceRecord,
}

pub fn branch_name(b: BranchChoice) -> &'static str {
    match b {
        BranchChoice::Color(c) => c.name(),
        BranchChoice::Identity => "identity",
    }
}

pub fn parse_branch(s: &str) -> Option<BranchChoice> {
    match s.to_ascii_lowercase().as_str() {
        "identity" => Some(BranchChoice::Identity),
        other => ColorChoice::parse(other).map(BranchChoice::Color),
    }
}

pub fn parse_direction(s: &str) -> Option<Direction> {
    match s.to_ascii_lowercase().as_str() {
        "ccw" | "counterclockwise" => Some(Direction::CounterClockwise),
        "cw" | "clockwise" => Some(Direction::Clockwise),
        _ => None,
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::CounterClockwise => "ccw",
        Direction::Clockwise => "cw",
    }
}

impl GaitFile {
    pub fn from_gait(g: &Gait) -> Self {
        let provenance = match &g.provenance {
            Provenance::Rectangle(s) => ProvenanceRecord::Spec(SpecRecord {
                name: s.name.clone(),
                alpha1: [round_sig(s.alpha1.0), round_sig(s.alpha1.1)],
                alpha2: [round_sig(s.alpha2.0), round_sig(s.alpha2.1)],
                direction: direction_name(s.direction).to_owned(),
                samples: s.samples,
                branch: branch_name(s.branch).to_owned(),
                period_s: round_sig(s.period_s),
            }),
            Provenance::Bias { of, eta } => ProvenanceRecord::Bias {
                of: of.clone(),
                eta: round_sig(*eta),
            },
            Provenance::External => ProvenanceRecord::External,
        };
        Self {
            name: g.name.clone(),
            period_s: round_sig(g.period_s),
            closed: g.closed,
            samples: g
                .samples
                .iter()
                .map(|s| SampleRecord {
                    t: round_sig(s.t),
                    alpha: s.point.to_array().map(round_sig),
                })
                .collect(),
            provenance,
        }
    }

    pub fn to_gait(&self) -> Result<Gait> {
        let provenance = match &self.provenance {
            ProvenanceRecord::Spec(s) => {
                let branch = parse_branch(&s.branch)
                    .ok_or_else(|| Error::usage(format!("unknown branch '{}' in gait file", s.branch)))?;
                let direction = parse_direction(&s.direction)
                    .ok_or_else(|| Error::usage(format!("unknown direction '{}' in gait file", s.direction)))?;
                Provenance::Rectangle(RectangleSpec {
                    name: s.name.clone(),
                    alpha1: (s.alpha1[0], s.alpha1[1]),
                    alpha2: (s.alpha2[0], s.alpha2[1]),
                    direction,
                    samples: s.samples,
                    branch,
                    period_s: s.period_s,
                })
            }
            ProvenanceRecord::Bias { of, eta } => Provenance::Bias {
                of: of.clone(),
                eta: *eta,
            },
            ProvenanceRecord::External => Provenance::External,
        };
        let samples = self
            .samples
            .iter()
            .map(|s| {
                Ok(GaitSample {
                    t: s.t,
                    point: GaitPoint::from_array(s.alpha)?,
                })
            })
            .collect::<std::result::Result<Vec<_>, tiltgait_core::Error>>()?;
        Ok(Gait::new(
            self.name.clone(),
            self.period_s,
            samples,
            self.closed,
            provenance,
        )?)
    }

    /// Colour the gait was built for, if it came from a coloured rectangle.
    pub fn declared_color(&self) -> Option<ColorChoice> {
        match &self.provenance {
            ProvenanceRecord::Spec(s) => match parse_branch(&s.branch) {
                Some(BranchChoice::Color(c)) => Some(c),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub i: usize,
    pub j: usize,
    pub labels_i: String,
    pub labels_j: String,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub gait: String,
    pub color: Option<String>,
    pub valid: bool,
    pub closure_ok: Option<bool>,
    pub sign_constant: bool,
    pub r_sign: Option<String>,
    pub max_jump_ratio: f64,
    pub violations: Vec<ViolationRecord>,
}

pub fn labels_text(l: [PlaneLabel; 2]) -> String {
    format!("({},{})", l[0].symbol(), l[1].symbol())
}

impl ValidationRecord {
    pub fn new(gait: &str, color: Option<ColorChoice>, rep: &ValidationReport) -> Self {
        Self {
            gait: gait.to_owned(),
            color: color.map(|c| c.name().to_owned()),
            valid: rep.valid,
            closure_ok: rep.closure_ok,
            sign_constant: rep.sign_constant,
            r_sign: rep.r_sign.map(|s| {
                match s {
                    RSign::Positive => "positive",
                    RSign::Negative => "negative",
                }
                .to_owned()
            }),
            max_jump_ratio: round_sig(rep.max_jump_ratio),
            violations: rep
                .violations
                .iter()
                .map(|v| ViolationRecord {
                    i: v.indices.0,
                    j: v.indices.1,
                    labels_i: labels_text(v.labels.0),
                    labels_j: labels_text(v.labels.1),
                    rule: v.rule.name().to_owned(),
                })
                .collect(),
        }
    }
}

/// One gait's entry in a margins report. `margin` is `None` when unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginRecord {
    pub gait: String,
    pub unbounded: bool,
    pub margin: Option<f64>,
    pub attained_at: Option<[f64; 2]>,
    pub polylines: usize,
    pub points: usize,
}

impl MarginRecord {
    pub fn new(c: &ContourSet, m: &RobustnessMargin) -> Self {
        Self {
            gait: c.gait.clone().unwrap_or_default(),
            unbounded: *m == RobustnessMargin::Unbounded,
            margin: m.attained_at().map(|_| round_sig(m.value())),
            attained_at: m.attained_at().map(|a| [round_sig(a.phi), round_sig(a.theta)]),
            polylines: c.polylines.iter().filter(|p| !p.points.is_empty()).count(),
            points: c.point_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginsReport {
    pub resolution: usize,
    pub time_samples: usize,
    pub gaits: Vec<MarginRecord>,
    /// First margin minus second when both are bounded or both unbounded.
    pub difference: Option<f64>,
    /// Whether the first gait's margin is at least the second's.
    pub first_not_smaller: Option<bool>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialise");
    s.push('\n');
    s
}

/// Writes through a sibling temporary file and a rename, so a failed write
/// never leaves a partial file at `path`.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

pub fn read_gait(path: &Path) -> Result<GaitFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })
}

/// One row per root: `i,j,alpha1,alpha2,root,alpha3,alpha4,label3,label4,r_value,residual`.
pub fn atlas_roots_csv(atlas: &SurfaceAtlas) -> String {
    let mut out = String::from("i,j,alpha1,alpha2,root,alpha3,alpha4,label3,label4,r_value,residual\n");
    for p in &atlas.points {
        for (k, r) in p.roots.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{k},{},{},{},{},{},{}",
                p.i,
                p.j,
                num(p.front.alpha1),
                num(p.front.alpha2),
                num(r.alpha3),
                num(r.alpha4),
                r.labels[0].symbol(),
                r.labels[1].symbol(),
                num(r.r_value),
                num(r.residual)
            );
        }
    }
    out
}

/// One row per node: colours available among its negative-`R` roots.
pub fn colors_csv(atlas: &SurfaceAtlas) -> String {
    let mut out = String::from("i,j,alpha1,alpha2,red,blue,other\n");
    for (p, c) in atlas.points.iter().zip(paint_map(atlas)) {
        let other: Vec<String> = c.other.iter().map(|l| labels_text(*l)).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.i,
            p.j,
            num(p.front.alpha1),
            num(p.front.alpha2),
            u8::from(c.red),
            u8::from(c.blue),
            other.join(" ")
        );
    }
    out
}

/// `gait,t_index,polyline_id,point_index,phi,theta`; `t_index` is empty for
/// a single gait point.
pub fn contours_csv(sets: &[&ContourSet]) -> String {
    let mut out = String::from("gait,t_index,polyline_id,point_index,phi,theta\n");
    for c in sets {
        let name = c.gait.as_deref().unwrap_or("");
        for (id, line) in c.polylines.iter().enumerate() {
            let t = match (line.sample, c.source) {
                (Some(k), _) | (None, ContourSource::Sample(k)) => k.to_string(),
                _ => String::new(),
            };
            for (k, p) in line.points.iter().enumerate() {
                let _ = writeln!(out, "{name},{t},{id},{k},{},{}", num(p.phi), num(p.theta));
            }
        }
    }
    out
}

pub fn vertices_csv(verts: &[GaitPoint]) -> String {
    let mut out = String::from("alpha1,alpha2,alpha3,alpha4\n");
    for v in verts {
        let a = v.to_array().map(num);
        let _ = writeln!(out, "{},{},{},{}", a[0], a[1], a[2], a[3]);
    }
    out
}
