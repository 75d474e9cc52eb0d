//! The `cmdist` command line.
//!
//! Every command writes one JSON document (or, for `compare`, a text
//! table) to `--out` or stdout. Exit status is 0 on success, 1 for bad
//! input and 2 when a computation fails.

pub mod plot;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{fixture, read_off, read_values, ComplexError, FixtureSpec, MeshFunction};
use crate::convex::{
    cmd_grid, cmd_maximize_with, diagram_at, matching_distance_lower_bound, slice_grid, CmdOptions, CmdResult,
    ConvexError, MatchResult, DEFAULT_EPS,
};
use crate::diagram::{bottleneck_distance, PersistenceDiagram};
use crate::exec::Executor;
use crate::pareto::{
    analytic_contours, cmd_via_special_values, load_contours, position_predict, special_values_with, Contour,
    ParetoError, SpecialOptions, SpecialValue, CURVATURE_FLOOR, DEDUP_TOL,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConvexError> for CliError {
    fn from(e: ConvexError) -> Self {
        match e {
            ConvexError::Persistence(_) | ConvexError::Diagram(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ParetoError> for CliError {
    fn from(e: ParetoError) -> Self {
        match e {
            ParetoError::Convex(e) => e.into(),
            ParetoError::Io { .. }
            | ParetoError::Json(_)
            | ParetoError::NoAnalyticContours(_)
            | ParetoError::TooFewSamples { .. }
            | ParetoError::NonFiniteSample { .. }
            | ParetoError::Regularity { .. }
            | ParetoError::MonotoneSplit { .. }
            | ParetoError::TOutOfRange(_)
            | ParetoError::TooManyContours { .. } => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cmdist", version, about = "Convex matching distance between R^2-valued functions on triangle meshes")]
pub struct Cli {
    /// Evaluate on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct First {
    /// Built-in fixture, e.g. `cone:64` or `ellipsoid(2,1):64`.
    #[arg(long, value_name = "NAME:RES")]
    pub fixture: Option<FixtureSpec>,
    /// OFF mesh.
    #[arg(long, value_name = "PATH")]
    pub mesh: Option<PathBuf>,
    /// Two-column CSV of vertex values.
    #[arg(long, value_name = "PATH")]
    pub values: Option<PathBuf>,
    /// Contour JSON.
    #[arg(long, value_name = "PATH")]
    pub contours: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Second {
    #[arg(long, value_name = "NAME:RES")]
    pub fixture2: Option<FixtureSpec>,
    #[arg(long, value_name = "PATH")]
    pub mesh2: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub values2: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub contours2: Option<PathBuf>,
}

impl Second {
    fn first(&self) -> First {
        First {
            fixture: self.fixture2,
            mesh: self.mesh2.clone(),
            values: self.values2.clone(),
            contours: self.contours2.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Bnb,
    Special,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// `AxB` slice grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub na: usize,
    pub nb: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("grid `{s}` is not of the form AxB");
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(GridSpec { na: a.trim().parse().map_err(|_| bad())?, nb: b.trim().parse().map_err(|_| bad())? })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.na, self.nb)
    }
}

fn degree_arg() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::<usize>::new().range(0..=2)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Persistence diagram of phi^t.
    Diagram {
        #[command(flatten)]
        first: First,
        #[arg(long, default_value_t = 0, value_parser = degree_arg())]
        degree: usize,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG of the diagram.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Bottleneck distance between the diagrams of phi^t and psi^t, or of two
    /// diagram files.
    Bottleneck {
        #[command(flatten)]
        first: First,
        #[command(flatten)]
        second: Second,
        #[arg(long, value_name = "PATH")]
        dgm: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        dgm2: Option<PathBuf>,
        #[arg(long, default_value_t = 0, value_parser = degree_arg())]
        degree: usize,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convex matching distance.
    Cmd {
        #[command(flatten)]
        first: First,
        #[command(flatten)]
        second: Second,
        #[arg(long, default_value_t = 0, value_parser = degree_arg())]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Mode::Bnb)]
        mode: Mode,
        /// Intervals of the uniform sweep in grid mode.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// In special mode, also run branch-and-bound and report the
        /// disagreement as the gap.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG of the g(t) trace.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Sampled lower bound on the classical matching distance.
    Matchdist {
        #[command(flatten)]
        first: First,
        #[command(flatten)]
        second: Second,
        #[arg(long, default_value_t = 0, value_parser = degree_arg())]
        degree: usize,
        #[arg(long, default_value = "11x11")]
        grid: GridSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predicted diagram coordinates against the mesh diagram.
    Predict {
        #[command(flatten)]
        first: First,
        #[arg(long, default_value_t = 0, value_parser = degree_arg())]
        degree: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG of the Pareto grid.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Special parameter values of two contour families.
    Special {
        #[command(flatten)]
        first: First,
        #[command(flatten)]
        second: Second,
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG of both Pareto grids.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// cmd and matchdist side by side.
    Compare {
        #[command(flatten)]
        first: First,
        #[command(flatten)]
        second: Second,
        #[arg(long, default_value_t = 0, value_parser = degree_arg())]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value = "11x11")]
        grid: GridSpec,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Defaults and inputs, repeated in every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub command: String,
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    pub executor: String,
    pub dedup_tol: f64,
    pub curvature_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub settings: Settings,
    pub diagram: PersistenceDiagram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BottleneckReport {
    pub settings: Settings,
    #[serde(with = "crate::json::extended_real")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmdReport {
    pub settings: Settings,
    #[serde(flatten)]
    pub result: CmdResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special: Option<Vec<SpecialValue>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub settings: Settings,
    #[serde(flatten)]
    pub result: MatchResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coordinate {
    pub value: f64,
    pub nearest: Option<f64>,
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictReport {
    pub settings: Settings,
    pub predicted: Vec<f64>,
    pub coordinates: Vec<Coordinate>,
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCliReport {
    pub settings: Settings,
    pub special_values: Vec<SpecialValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub settings: Settings,
    pub cmd: CmdResult,
    pub matchdist: MatchResult,
    /// `d_B` at the slice `(1/2, 0)`.
    #[serde(with = "crate::json::extended_real")]
    pub half_slice: f64,
}

struct Loaded {
    mesh: MeshFunction,
    label: String,
}

fn load(src: &First, suffix: &str) -> Result<Loaded, CliError> {
    match (src.fixture, &src.mesh, &src.values) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(CliError::Input(format!("--fixture{suffix} conflicts with --mesh{suffix}/--values{suffix}")))
        }
        (Some(spec), None, None) => {
            let (k, f) = fixture(spec.kind, spec.resolution)?;
            Ok(Loaded { mesh: MeshFunction::new(k, f)?, label: format!("fixture:{spec}") })
        }
        (None, Some(m), Some(v)) => {
            let k = read_off(m)?;
            let f = read_values(v)?;
            Ok(Loaded { mesh: MeshFunction::new(k, f)?, label: format!("mesh:{} values:{}", m.display(), v.display()) })
        }
        (None, Some(_), None) => Err(CliError::Input(format!("--mesh{suffix} needs --values{suffix}"))),
        (None, None, Some(_)) => Err(CliError::Input(format!("--values{suffix} needs --mesh{suffix}"))),
        (None, None, None) => Err(CliError::Input(format!("missing input: give --fixture{suffix} or --mesh{suffix} with --values{suffix}"))),
    }
}

fn contours(src: &First, suffix: &str) -> Result<Vec<Contour>, CliError> {
    if let Some(p) = &src.contours {
        return Ok(load_contours(p)?);
    }
    match src.fixture {
        Some(spec) if spec.kind.is_closed() => Ok(analytic_contours(spec.kind)?),
        Some(spec) => Err(CliError::Input(format!("--contours{suffix} required: no analytic contours for `{}`", spec.kind))),
        None => Err(CliError::Input(format!("--contours{suffix} required without a closed --fixture{suffix}"))),
    }
}

fn contour_label(src: &First) -> String {
    match (&src.contours, src.fixture) {
        (Some(p), _) => format!("contours:{}", p.display()),
        (None, Some(spec)) => format!("contours:{}", spec.kind),
        _ => "contours:none".into(),
    }
}

fn check_eps(eps: f64) -> Result<(), CliError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--eps must be positive, got {eps}")))
    }
}

fn check_t(t: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(CliError::Input(format!("--t must lie in [0, 1], got {t}")))
    }
}

fn settings(command: &str, inputs: Vec<String>, executor: Executor) -> Settings {
    Settings {
        command: command.into(),
        inputs,
        degree: None,
        t: None,
        eps: None,
        mode: None,
        grid: None,
        executor: executor.name().into(),
        dedup_tol: DEDUP_TOL,
        curvature_floor: CURVATURE_FLOOR,
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    crate::json::to_string(v).map_err(|e| CliError::Internal(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Text table for `compare`.
pub fn compare_table(r: &CompareReport) -> String {
    let g = crate::json::format_g17;
    let ext = |v: f64| if v.is_infinite() { "inf".to_string() } else { g(v) };
    let rows = [
        ("quantity", "cmd_k".to_string(), "d_match_k (sampled)".to_string()),
        ("value", ext(r.cmd.value), ext(r.matchdist.value)),
        (
            "witness",
            format!("t = {}", g(r.cmd.argmax_t)),
            format!("(a, b) = ({}, {})", g(r.matchdist.witness.a), g(r.matchdist.witness.b)),
        ),
        ("evaluations", r.cmd.evaluations.to_string(), r.matchdist.slices.to_string()),
        ("gap", g(r.cmd.gap), "lower bound".to_string()),
        ("slice (1/2, 0)", String::new(), ext(r.half_slice)),
    ];
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (a, b, c) in rows {
        let _ = writeln!(s, "{a:<w0$}  {b:<w1$}  {c}");
    }
    s
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let executor = if cli.sequential { Executor::Sequential } else { Executor::default() };
    let (text, out) = match &cli.command {
        Command::Diagram { first, degree, t, out, plot } => {
            check_t(*t)?;
            let a = load(first, "")?;
            let diagram = diagram_at(&a.mesh, *degree, *t)?;
            if let Some(p) = plot {
                write_file(p, &plot::diagram_svg(&diagram, &format!("degree {degree} diagram at t = {t}")))?;
            }
            let mut s = settings("diagram", vec![a.label], executor);
            s.degree = Some(*degree);
            s.t = Some(*t);
            (json(&DiagramReport { settings: s, diagram })?, out)
        }
        Command::Bottleneck { first, second, dgm, dgm2, degree, t, out } => {
            check_t(*t)?;
            let (d1, d2, inputs) = match (dgm, dgm2) {
                (Some(p1), Some(p2)) => {
                    let read = |p: &PathBuf| -> Result<PersistenceDiagram, CliError> {
                        let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                        PersistenceDiagram::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
                    };
                    (read(p1)?, read(p2)?, vec![format!("dgm:{}", p1.display()), format!("dgm:{}", p2.display())])
                }
                (None, None) => {
                    let a = load(first, "")?;
                    let b = load(&second.first(), "2")?;
                    (diagram_at(&a.mesh, *degree, *t)?, diagram_at(&b.mesh, *degree, *t)?, vec![a.label, b.label])
                }
                _ => return Err(CliError::Input("--dgm and --dgm2 go together".into())),
            };
            let value = bottleneck_distance(&d1, &d2).map_err(|e| CliError::Input(e.to_string()))?;
            let mut s = settings("bottleneck", inputs, executor);
            if dgm.is_none() {
                s.degree = Some(*degree);
                s.t = Some(*t);
            }
            (json(&BottleneckReport { settings: s, value })?, out)
        }
        Command::Cmd { first, second, degree, eps, mode, samples, cross_check, out, plot } => {
            check_eps(*eps)?;
            let a = load(first, "")?;
            let b = load(&second.first(), "2")?;
            let mut inputs = vec![a.label.clone(), b.label.clone()];
            let (result, special) = match mode {
                Mode::Bnb => (cmd_maximize_with(&a.mesh, &b.mesh, *degree, &CmdOptions { eps: *eps, executor, ..Default::default() })?, None),
                Mode::Grid => (cmd_grid(&a.mesh, &b.mesh, *degree, *samples, executor)?, None),
                Mode::Special => {
                    let (c1, c2) = (contours(first, "")?, contours(&second.first(), "2")?);
                    inputs.push(contour_label(first));
                    inputs.push(contour_label(&second.first()));
                    let opts = SpecialOptions { executor, cross_check: cross_check.then_some(*eps), ..Default::default() };
                    let (r, sv) = cmd_via_special_values(&a.mesh, &b.mesh, *degree, &c1, &c2, &opts)?;
                    (r, Some(sv))
                }
            };
            if let Some(p) = plot {
                // mark special values whenever contours are at hand
                let marks: Vec<f64> = match &special {
                    Some(sv) => sv.iter().map(|v| v.t).collect(),
                    None => match (contours(first, ""), contours(&second.first(), "2")) {
                        (Ok(c1), Ok(c2)) => special_values_with(&c1, &c2, executor)?.iter().map(|v| v.t).collect(),
                        _ => Vec::new(),
                    },
                };
                write_file(p, &plot::trace_svg(&result, &marks, &format!("g(t), degree {degree}")))?;
            }
            let mut s = settings("cmd", inputs, executor);
            s.degree = Some(*degree);
            s.eps = Some(*eps);
            s.mode = Some(result.mode.name().into());
            if *mode == Mode::Grid {
                s.grid = Some(samples.to_string());
            }
            (json(&CmdReport { settings: s, result, special })?, out)
        }
        Command::Matchdist { first, second, degree, grid, out } => {
            let a = load(first, "")?;
            let b = load(&second.first(), "2")?;
            let result = matching_distance_lower_bound(&a.mesh, &b.mesh, *degree, &slice_grid(grid.na, grid.nb)?, executor)?;
            let mut s = settings("matchdist", vec![a.label, b.label], executor);
            s.degree = Some(*degree);
            s.grid = Some(grid.to_string());
            (json(&MatchReport { settings: s, result })?, out)
        }
        Command::Predict { first, degree, t, out, plot } => {
            check_t(*t)?;
            let a = load(first, "")?;
            let cs = contours(first, "")?;
            let predicted = position_predict(&cs, *t)?;
            let mut coordinates: Vec<Coordinate> = diagram_at(&a.mesh, *degree, *t)?
                .finite_coordinates()
                .into_iter()
                .map(|value| {
                    let nearest = predicted.iter().copied().min_by(|x, y| (x - value).abs().total_cmp(&(y - value).abs()));
                    Coordinate { value, nearest, deviation: nearest.map(|n| (n - value).abs()) }
                })
                .collect();
            coordinates.sort_by(|x, y| x.value.total_cmp(&y.value));
            let max_deviation = coordinates.iter().map(|c| c.deviation).try_fold(0.0f64, |m, d| d.map(|d| m.max(d)));
            if let Some(p) = plot {
                write_file(p, &plot::pareto_svg(&[(&contour_label(first), &cs)], "Pareto grid"))?;
            }
            let mut s = settings("predict", vec![a.label, contour_label(first)], executor);
            s.degree = Some(*degree);
            s.t = Some(*t);
            (json(&PredictReport { settings: s, predicted, coordinates, max_deviation })?, out)
        }
        Command::Special { first, second, out, plot } => {
            let c1 = contours(first, "")?;
            let sec = second.first();
            let c2 = if sec.contours.is_some() || sec.fixture.is_some() { contours(&sec, "2")? } else { Vec::new() };
            let special_values = special_values_with(&c1, &c2, executor)?;
            if let Some(p) = plot {
                let (l1, l2) = (contour_label(first), contour_label(&sec));
                write_file(p, &plot::pareto_svg(&[(&l1, &c1), (&l2, &c2)], "Pareto grids"))?;
            }
            let s = settings("special", vec![contour_label(first), contour_label(&sec)], executor);
            (json(&SpecialCliReport { settings: s, special_values })?, out)
        }
        Command::Compare { first, second, degree, eps, grid, format, out } => {
            check_eps(*eps)?;
            let a = load(first, "")?;
            let b = load(&second.first(), "2")?;
            let cmd = cmd_maximize_with(&a.mesh, &b.mesh, *degree, &CmdOptions { eps: *eps, executor, ..Default::default() })?;
            let matchdist = matching_distance_lower_bound(&a.mesh, &b.mesh, *degree, &slice_grid(grid.na, grid.nb)?, executor)?;
            let half = [crate::convex::SlicePoint::new(0.5, 0.0)?];
            let half_slice = matching_distance_lower_bound(&a.mesh, &b.mesh, *degree, &half, executor)?.value;
            let mut s = settings("compare", vec![a.label, b.label], executor);
            s.degree = Some(*degree);
            s.eps = Some(*eps);
            s.grid = Some(grid.to_string());
            let report = CompareReport { settings: s, cmd, matchdist, half_slice };
            let text = match format {
                Format::Table => compare_table(&report),
                Format::Json => json(&report)?,
            };
            (text, out)
        }
    };
    match out {
        Some(p) => write_file(p, &text),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string())),
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{}", e.render());
                    return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 1 } else { 0 };
                }
                _ => 1,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "cmdist: {e}");
            e.exit_code()
        }
    }
}
