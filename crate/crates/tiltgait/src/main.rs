use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tiltgait::config::{check_output_path, RunConfig, SolverSection};
use tiltgait::io::{
    parse_branch, parse_direction, read_gait, to_json, write_text, AtlasFile, GaitFile, MarginRecord, MarginsReport,
    ValidationRecord,
};
use tiltgait::{parallel, report, svg, Error, Result};
use tiltgait_core::atlas::GridSpec;
use tiltgait_core::attitude::GaitComparison;
use tiltgait_core::{
    bias_gait, gait_vertices, rectangle_gait, robustness_margin, solve_rear_angles, triangle_report, BiasSpec,
    ColorChoice, FrontPair, RectangleSpec,
};

/// Gait surfaces of a four-rotor tilt-rotor: root atlases, gait planning,
/// colour validation and singular-attitude analysis.
#[derive(Debug, Parser)]
#[command(name = "tiltgait", version)]
struct Cli {
    /// JSON run configuration; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args)]
struct SolverFlags {
    /// Newton starts per axis.
    #[arg(long, global = true)]
    seed_grid: Option<usize>,
    /// Residual tolerance on (R_phi, R_theta).
    #[arg(long, global = true)]
    newton_tol: Option<f64>,
    /// Roots closer than this are merged.
    #[arg(long, global = true)]
    dedup_radius: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the rear angles on an n x n grid of front pairs.
    Surface {
        #[arg(long)]
        grid_n: Option<usize>,
        /// Atlas JSON output.
        #[arg(short, long)]
        output: PathBuf,
        /// Per-root CSV (branch values and labels).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Per-node colour availability CSV.
        #[arg(long)]
        colors: Option<PathBuf>,
        #[arg(long, env = "TILTGAIT_JOBS")]
        jobs: Option<usize>,
    },
    /// List all labelled rear roots at one front pair.
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
    },
    #[command(subcommand)]
    Gait(GaitCommand),
    /// Singular attitudes of a gait (and optionally a second one) with margins.
    Singular {
        #[arg(short, long)]
        input: PathBuf,
        /// Second gait, drawn blue against the first in red.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Output stem: writes <stem>.csv, <stem>.svg and <stem>.margins.json.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Attitude grid resolution per axis (odd).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        time_samples: Option<usize>,
        #[arg(long, env = "TILTGAIT_JOBS")]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum GaitCommand {
    /// Lift a rectangle of front pairs onto a branch of the surface.
    Rect {
        /// alpha1 range as lo:hi.
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        /// alpha2 range as lo:hi.
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        /// red, blue or identity.
        #[arg(long)]
        color: String,
        #[arg(long, default_value_t = 128)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        period: f64,
        /// ccw or cw.
        #[arg(long, default_value = "ccw")]
        direction: String,
        /// Defaults to the output file stem.
        #[arg(long)]
        name: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Scale the rear angles of a gait by eta.
    Bias {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        eta: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Certify a gait; exit status 0 only if it is valid.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
        /// Declared colour; defaults to the colour the gait was built with.
        #[arg(long)]
        color: Option<String>,
        /// JSON report output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Samples where every tilting angle is at an extreme.
    Vertices {
        #[arg(short, long)]
        input: PathBuf,
        /// CSV output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::usage(format!("expected a range lo:hi, got '{s}'"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| Error::usage(e.to_string()))?,
        None => RunConfig::default(),
    };
    cfg.merge_solver(&SolverSection {
        seed_grid: cli.solver.seed_grid,
        newton_tol: cli.solver.newton_tol,
        dedup_radius: cli.solver.dedup_radius,
        ..Default::default()
    });
    Ok(cfg)
}

fn parse_color(s: &str) -> Result<ColorChoice> {
    ColorChoice::parse(s).ok_or_else(|| Error::usage(format!("unknown colour '{s}' (red or blue)")))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = load_config(&cli)?;
    match cli.cmd {
        Command::Surface {
            grid_n,
            output,
            csv,
            colors,
            jobs,
        } => {
            let solver = cfg.solver_config()?;
            let grid = GridSpec::new(grid_n.or(cfg.grid_n).unwrap_or(17)).map_err(|e| Error::usage(e.to_string()))?;
            for p in [Some(&output), csv.as_ref(), colors.as_ref()].into_iter().flatten() {
                check_output_path(p)?;
            }
            let atlas = parallel::sweep_grid(grid, &solver, jobs.or(cfg.jobs))?;
            write_text(&output, &to_json(&AtlasFile::from_atlas(&atlas)))?;
            if let Some(p) = csv {
                write_text(&p, &tiltgait::io::atlas_roots_csv(&atlas))?;
            }
            if let Some(p) = colors {
                write_text(&p, &tiltgait::io::colors_csv(&atlas))?;
            }
            print!("{}", report::root_count_table(&atlas));
            print!("{}", report::triangle_summary(&triangle_report(&atlas), &atlas));
            Ok(ExitCode::SUCCESS)
        }
        Command::Roots { a1, a2 } => {
            let solver = cfg.solver_config()?;
            let front = FrontPair::new(a1, a2).map_err(|e| Error::usage(e.to_string()))?;
            let roots = solve_rear_angles(front, &solver)?;
            println!("{} roots at (alpha1, alpha2) = ({a1}, {a2})", roots.len());
            print!("{}", report::roots_table(&roots));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gait(GaitCommand::Rect {
            a1,
            a2,
            color,
            samples,
            period,
            direction,
            name,
            output,
        }) => {
            let branch = parse_branch(&color)
                .ok_or_else(|| Error::usage(format!("unknown branch '{color}' (red, blue or identity)")))?;
            let direction = parse_direction(&direction)
                .ok_or_else(|| Error::usage(format!("unknown direction '{direction}' (ccw or cw)")))?;
            let name = name.unwrap_or_else(|| {
                output
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "gait".into())
            });
            let mut spec = RectangleSpec::new(name, parse_range(&a1)?, parse_range(&a2)?, branch);
            spec.samples = samples;
            spec.period_s = period;
            spec.direction = direction;
            spec.check().map_err(|e| Error::usage(e.to_string()))?;
            check_output_path(&output)?;
            let g = rectangle_gait(&spec, &cfg.solver_config()?, &cfg.validation_config()?)?;
            write_text(&output, &to_json(&GaitFile::from_gait(&g)))?;
            println!("wrote {} ({} samples)", output.display(), g.samples.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Gait(GaitCommand::Bias { input, eta, output }) => {
            let bias = BiasSpec::new(eta).map_err(|e| Error::usage(e.to_string()))?;
            check_output_path(&output)?;
            let g = read_gait(&input)?.to_gait()?;
            let b = bias_gait(&g, bias);
            write_text(&output, &to_json(&GaitFile::from_gait(&b)))?;
            println!("wrote {} ({})", output.display(), b.name);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gait(GaitCommand::Validate {
            input,
            color,
            report: out,
        }) => {
            let file = read_gait(&input)?;
            let color = match color {
                Some(c) => Some(parse_color(&c)?),
                None => file.declared_color(),
            };
            if let Some(p) = &out {
                check_output_path(p)?;
            }
            let g = file.to_gait()?;
            let rep = g.validate(color, &cfg.solver_config()?, &cfg.validation_config()?)?;
            let rec = ValidationRecord::new(&g.name, color, &rep);
            if let Some(p) = out {
                write_text(&p, &to_json(&rec))?;
            }
            print!("{}", report::validation_summary(&rec));
            Ok(if rec.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Gait(GaitCommand::Vertices { input, output }) => {
            let g = read_gait(&input)?.to_gait()?;
            let verts = gait_vertices(&g);
            if let Some(p) = output {
                check_output_path(&p)?;
                write_text(&p, &tiltgait::io::vertices_csv(&verts))?;
            }
            print!("{}", report::vertices_table(&verts));
            Ok(ExitCode::SUCCESS)
        }
        Command::Singular {
            input,
            compare,
            output,
            grid,
            time_samples,
            jobs,
        } => {
            cfg.attitude_resolution = grid.or(cfg.attitude_resolution);
            cfg.time_samples = time_samples.or(cfg.time_samples);
            let grid = cfg.attitude_grid()?;
            let samples = cfg.time_samples()?;
            let stems = output.as_ref().map(|s| {
                [
                    with_suffix(s, ".csv"),
                    with_suffix(s, ".svg"),
                    with_suffix(s, ".margins.json"),
                ]
            });
            for p in stems.iter().flatten() {
                check_output_path(p)?;
            }
            let jobs = jobs.or(cfg.jobs);
            let mut sets = vec![parallel::gait_singular_union(
                &read_gait(&input)?.to_gait()?,
                samples,
                &grid,
                jobs,
            )?];
            if let Some(c) = &compare {
                sets.push(parallel::gait_singular_union(
                    &read_gait(c)?.to_gait()?,
                    samples,
                    &grid,
                    jobs,
                )?);
            }
            let margins: Vec<_> = sets.iter().map(robustness_margin).collect();
            let (difference, first_not_smaller) = if sets.len() == 2 {
                let cmp = GaitComparison::from_contours(sets[0].clone(), sets[1].clone());
                let d = cmp.difference();
                (
                    d.is_finite().then_some(tiltgait::format::round_sig(d)),
                    Some(margins[0].value() >= margins[1].value()),
                )
            } else {
                (None, None)
            };
            let rep = MarginsReport {
                resolution: grid.resolution(),
                time_samples: samples,
                gaits: sets
                    .iter()
                    .zip(&margins)
                    .map(|(c, m)| MarginRecord::new(c, m))
                    .collect(),
                difference,
                first_not_smaller,
            };
            let refs: Vec<_> = sets.iter().collect();
            if let Some([csv, svg_path, margins_path]) = stems {
                write_text(&csv, &tiltgait::io::contours_csv(&refs))?;
                write_text(&svg_path, &svg::render(&refs))?;
                write_text(&margins_path, &to_json(&rep))?;
            }
            print!("{}", report::margins_summary(&rep));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
