//! The `p2c` command-line front end.
//!
//! Numeric options resolve as: command-line flag, then the `--config` file
//! (`key = value` lines, keys spelled like the long flags), then the
//! built-in default.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acceptance::{self, Outcome, CRITERIA};
use crate::classifier::{classify_negative, classify_positive, BothSides, ClassifierConfig};
use crate::connection::{self, Case, CurveConstraint, Side, SCHEMA_VERSION};
use crate::pii_ode::{integrate, InitialData, IntegrationStats};
use crate::stokes_numeric::{compute_stokes, validate_prediction, StokesConfig};

/// Largest number of cells a sweep may have.
pub const MAX_SWEEP_CELLS: usize = 1_000_000;

const PRECEDENCE: &str = "\
Option precedence: command-line flags > config file > defaults.
The config file (--config PATH) holds `key = value` lines whose keys are the
long flag names without dashes prefix, e.g. `tol = 1e-11` or `t-min = -40`.
Lines starting with `#` are ignored.

Exit codes: 0 success, 1 verification failure, 2 usage, 3 domain, 4 budget.";

#[derive(Debug, Parser)]
#[command(name = "p2c", version, about = "Painleve II initial-value connection toolkit", after_help = PRECEDENCE)]
pub struct Cli {
    /// Plain `key = value` file supplying defaults for numeric options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate q(0)=a, q'(0)=b and classify both half-axes.
    Classify(ClassifyArgs),
    /// Connection-formula report for (a, b).
    Predict(PointArgs),
    /// Locate the separatrix curves along a fixed-a or fixed-b line.
    Curves(CurvesArgs),
    /// Stokes multipliers from the Lax pair, optionally against the prediction.
    Stokes(StokesArgs),
    /// Raster of predicted (and optionally measured) families over a box.
    Sweep(SweepArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Left end of the integration span [default: -30].
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    /// Right end of the integration span [default: 16].
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    /// Integrator tolerance [default: 1e-11].
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    /// Highest curve index; curves 1..=n-max are located.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Hold a fixed at this value.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "fixed_b")]
    pub fixed_a: Option<f64>,
    /// Hold b fixed at this value.
    #[arg(long, allow_hyphen_values = true)]
    pub fixed_b: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StokesArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Initial transport radius [default: 8].
    #[arg(long)]
    pub radius: Option<f64>,
    /// Transport tolerance [default: 1e-12].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Emit the numeric-versus-predicted table as CSV instead of the JSON data.
    #[arg(long)]
    pub validate: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b_max: Option<f64>,
    /// Grid points along a [default: 21].
    #[arg(long)]
    pub na: Option<usize>,
    /// Grid points along b [default: 21].
    #[arg(long)]
    pub nb: Option<usize>,
    /// Integrate and classify every cell whose indices are multiples of this stride.
    #[arg(long)]
    pub verify: Option<usize>,
    /// Integrator tolerance for verified cells [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Criteria to run, by number or name (quadrature, constants, ode,
    /// stokes, convergence, separatrix, curves, p1). Repeatable or comma separated.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Print the outcomes as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0} of {1} criteria failed")]
    Verification(usize, usize),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(..) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Budget(_) => "budget",
            CliError::Verification(..) => "verification",
            CliError::Io(_) => "io",
        }
    }

    /// The machine-readable form printed on stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "kind": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() }
        })
        .to_string()
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// `key = value` pairs from a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile(HashMap<String, String>);

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            map.insert(normalize_key(key), value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Flag value if given, else the file's, else the default.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.0.get(&normalize_key(key)) {
            Some(raw) => raw.parse().map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {raw:?}"))),
            None => Ok(default),
        }
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches('-').replace('_', "-").to_lowercase()
}

/// Scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses the arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let mut out: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    match &cli.command {
        Command::Classify(args) => cmd_classify(args, &file, &mut out),
        Command::Predict(args) => cmd_predict(args, &mut out),
        Command::Curves(args) => cmd_curves(args, &file, &mut out),
        Command::Stokes(args) => cmd_stokes(args, &file, &mut out),
        Command::Sweep(args) => cmd_sweep(args, &file, &mut out),
        Command::Verify(args) => cmd_verify(args, &mut out),
    }?;
    out.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Output of `p2c classify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub a: f64,
    pub b: f64,
    pub t_range: (f64, f64),
    pub stats: IntegrationStats,
    pub pole_count: usize,
    pub sides: BothSides,
}

fn cmd_classify(args: &ClassifyArgs, file: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let t_min = file.resolve(args.t_min, "t-min", -30.0)?;
    let t_max = file.resolve(args.t_max, "t-max", 16.0)?;
    let tol = file.resolve(args.tol, "tol", 1e-11)?;
    if !(t_min < 0.0 && 0.0 < t_max) {
        return Err(CliError::Usage(format!("need t-min < 0 < t-max, got t-min = {t_min}, t-max = {t_max}")));
    }
    let report = classify_point(args.point.a, args.point.b, t_min, t_max, tol)?;
    write_json(out, &report)
}

/// Margin integrated beyond each end so that a pole just outside the span
/// cannot stop the run short of the classification window.
const SPAN_MARGIN: f64 = 1.0;

/// Integrates over `[t_min, t_max]` and classifies each side on its outer half.
pub fn classify_point(a: f64, b: f64, t_min: f64, t_max: f64, tol: f64) -> Result<ClassifyReport, CliError> {
    let traj = integrate(InitialData::new(a, b), t_min - SPAN_MARGIN, t_max + SPAN_MARGIN, tol).map_err(domain)?;
    let cfg = ClassifierConfig {
        negative_window: (t_min, 0.5 * t_min),
        positive_window: (0.5 * t_max, t_max),
        ..ClassifierConfig::default()
    };
    let sides = BothSides {
        negative: classify_negative(&traj, cfg.negative_window, &cfg).map_err(|e| e.to_string()),
        positive: classify_positive(&traj, cfg.positive_window, &cfg).map_err(|e| e.to_string()),
    };
    Ok(ClassifyReport {
        schema_version: SCHEMA_VERSION,
        a,
        b,
        t_range: (t_min, t_max),
        stats: traj.stats,
        pole_count: traj.poles.len(),
        sides,
    })
}

fn cmd_predict(args: &PointArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = connection::connection_report(args.a, args.b).map_err(domain)?;
    write_json(out, &report)
}

fn cmd_curves(args: &CurvesArgs, file: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let n_max = file.resolve(args.n_max, "n-max", 5)?;
    if n_max == 0 {
        return Err(CliError::Usage("n-max must be at least 1".into()));
    }
    let constraint = match (args.fixed_a, args.fixed_b) {
        (Some(v), None) => CurveConstraint::FixedA(v),
        (None, Some(v)) => CurveConstraint::FixedB(v),
        (None, None) => CurveConstraint::FixedB(file.resolve(None, "fixed-b", 0.0)?),
        (Some(_), Some(_)) => return Err(CliError::Usage("give only one of --fixed-a, --fixed-b".into())),
    };
    let case = match args.case {
        CaseArg::One => Case::One,
        CaseArg::Two => Case::Two,
    };
    let points = (1..=n_max)
        .map(|n| connection::locate_curve(case, n, constraint))
        .collect::<Result<Vec<_>, _>>()
        .map_err(domain)?;
    match args.format {
        Format::Json => write_json(out, &serde_json::json!({ "schema_version": SCHEMA_VERSION, "points": points })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "a", "b", "xi", "residual"]).map_err(io::Error::from)?;
            for p in &points {
                w.write_record([p.n.to_string(), sci(p.a), sci(p.b), sci(p.xi), sci(p.residual)])
                    .map_err(io::Error::from)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn cmd_stokes(args: &StokesArgs, file: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let defaults = StokesConfig::default();
    let cfg = StokesConfig {
        radius: file.resolve(args.radius, "radius", defaults.radius)?,
        tol: file.resolve(args.tol, "tol", defaults.tol)?,
        ..defaults
    };
    let (a, b) = (args.point.a, args.point.b);
    if !args.validate {
        let data = compute_stokes(a, b, &cfg).map_err(domain)?;
        return write_json(out, &data);
    }
    let v = validate_prediction(a, b, &cfg).map_err(domain)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["xi", "k", "numeric_re", "numeric_im", "predicted_re", "predicted_im", "rel_err"])
        .map_err(io::Error::from)?;
    for r in &v.rows {
        w.write_record([
            sci(r.xi),
            r.k.to_string(),
            sci(r.numeric_re),
            sci(r.numeric_im),
            sci(r.predicted_re),
            sci(r.predicted_im),
            sci(r.rel_err),
        ])
        .map_err(io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

/// One raster cell of `p2c sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub b: f64,
    /// `one`, `two`, or `n/a` on the degenerate lines and where the
    /// contour constants are undefined.
    pub case: String,
    pub xi: Option<f64>,
    pub side: Option<Side>,
    pub predicted: String,
    pub curve_index: Option<u32>,
    pub measured: Option<String>,
    pub mismatch: Option<bool>,
}

/// Grid of a sweep, row-major over `(i, j)` with `a` the slow index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub na: usize,
    pub nb: usize,
}

impl SweepGrid {
    fn coord(range: (f64, f64), n: usize, i: usize) -> f64 {
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (Self::coord(self.a_range, self.na, i), Self::coord(self.b_range, self.nb, j))
    }
}

fn predict_cell(grid: &SweepGrid, i: usize, j: usize) -> SweepCell {
    let (a, b) = grid.point(i, j);
    let mut cell = SweepCell {
        i,
        j,
        a,
        b,
        case: "n/a".into(),
        xi: None,
        side: None,
        predicted: "n/a".into(),
        curve_index: None,
        measured: None,
        mismatch: None,
    };
    if let Ok(sd) = connection::scale(a, b) {
        cell.xi = Some(sd.xi);
        if let Ok(p) = connection::predict_parameters(&sd) {
            cell.case = match sd.case {
                Case::One => "one".into(),
                Case::Two => "two".into(),
            };
            cell.side = Some(p.side);
            cell.predicted = p.params.name().into();
            cell.curve_index = Some(p.curve_index);
        }
    }
    cell
}

/// Measured family on the side the prediction speaks about; cells without a
/// prediction use the side their regime `sgn(a^4 - b^2)` would have.
fn measure_cell(cell: &mut SweepCell, tol: f64) {
    let side = cell.side.unwrap_or(if cell.a.powi(4) >= cell.b * cell.b { Side::Positive } else { Side::Negative });
    let cfg = ClassifierConfig::default();
    let init = InitialData::new(cell.a, cell.b);
    let measured = match side {
        Side::Negative => integrate(init, -30.0 - SPAN_MARGIN, 0.0, tol)
            .map_err(|e| e.to_string())
            .and_then(|t| classify_negative(&t, cfg.negative_window, &cfg).map_err(|e| e.to_string())),
        Side::Positive => integrate(init, 0.0, 16.0 + SPAN_MARGIN, tol)
            .map_err(|e| e.to_string())
            .and_then(|t| classify_positive(&t, cfg.positive_window, &cfg).map_err(|e| e.to_string())),
    };
    let label = match measured {
        Ok(c) => c.family.name().to_string(),
        Err(_) => "unclassified".to_string(),
    };
    cell.mismatch = cell.side.map(|_| label != cell.predicted);
    cell.measured = Some(label);
}

/// Worker pool honouring `P2C_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("P2C_THREADS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("P2C_THREADS must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Domain(e.to_string()))
}

/// Evaluates every cell in parallel; the result is in row-major order.
pub fn sweep(grid: &SweepGrid, verify_stride: Option<usize>, tol: f64) -> Result<Vec<SweepCell>, CliError> {
    if grid.na < 2 || grid.nb < 2 {
        return Err(CliError::Usage("grid needs at least 2 points per axis".into()));
    }
    let cells = grid.na.saturating_mul(grid.nb);
    if cells > MAX_SWEEP_CELLS {
        return Err(CliError::Budget(format!("{cells} cells exceed the limit of {MAX_SWEEP_CELLS}")));
    }
    if verify_stride == Some(0) {
        return Err(CliError::Usage("verify stride must be positive".into()));
    }
    let pool = thread_pool()?;
    Ok(pool.install(|| {
        (0..cells)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / grid.nb, idx % grid.nb);
                let mut cell = predict_cell(grid, i, j);
                if let Some(stride) = verify_stride {
                    if i % stride == 0 && j % stride == 0 {
                        measure_cell(&mut cell, tol);
                    }
                }
                cell
            })
            .collect()
    }))
}

fn cmd_sweep(args: &SweepArgs, file: &ConfigFile, out: &mut dyn Write) -> Result<(), CliError> {
    let grid = SweepGrid {
        a_range: (file.resolve(args.a_min, "a-min", -2.0)?, file.resolve(args.a_max, "a-max", 2.0)?),
        b_range: (file.resolve(args.b_min, "b-min", -2.0)?, file.resolve(args.b_max, "b-max", 2.0)?),
        na: file.resolve(args.na, "na", 21)?,
        nb: file.resolve(args.nb, "nb", 21)?,
    };
    let stride = match args.verify {
        Some(s) => Some(s),
        None => file.resolve(None, "verify", 0usize).map(|s| (s > 0).then_some(s))?,
    };
    let tol = file.resolve(args.tol, "tol", 1e-10)?;
    let cells = sweep(&grid, stride, tol)?;
    match args.format {
        Format::Json => write_json(out, &serde_json::json!({ "schema_version": SCHEMA_VERSION, "cells": cells })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "i",
                "j",
                "a",
                "b",
                "case",
                "xi",
                "side",
                "predicted",
                "curve_index",
                "measured",
                "mismatch",
            ])
            .map_err(io::Error::from)?;
            for c in &cells {
                let side = match c.side {
                    Some(Side::Negative) => "negative",
                    Some(Side::Positive) => "positive",
                    None => "n/a",
                };
                w.write_record([
                    c.i.to_string(),
                    c.j.to_string(),
                    sci(c.a),
                    sci(c.b),
                    c.case.clone(),
                    c.xi.map_or("n/a".into(), sci),
                    side.into(),
                    c.predicted.clone(),
                    c.curve_index.map_or("n/a".into(), |n| n.to_string()),
                    c.measured.clone().unwrap_or_default(),
                    c.mismatch.map_or(String::new(), |m| u8::from(m).to_string()),
                ])
                .map_err(io::Error::from)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

/// Maps `--only` entries to criterion numbers.
pub fn criterion_ids(only: &[String]) -> Result<Vec<u8>, CliError> {
    if only.is_empty() {
        return Ok(CRITERIA.to_vec());
    }
    let mut ids = Vec::new();
    for raw in only {
        let key = raw.trim().to_lowercase();
        let id = match key.as_str() {
            "quadrature" => 1,
            "constants" => 2,
            "ode" => 3,
            "stokes" => 4,
            "convergence" => 5,
            "separatrix" => 6,
            "curves" => 7,
            "p1" => 8,
            other => other
                .parse::<u8>()
                .ok()
                .filter(|id| CRITERIA.contains(id))
                .ok_or_else(|| CliError::Usage(format!("unknown criterion {raw:?}")))?,
        };
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ids = criterion_ids(&args.only)?;
    let mut outcomes: Vec<Outcome> = Vec::with_capacity(ids.len());
    for id in &ids {
        let o = acceptance::run(*id);
        if !args.json {
            writeln!(out, "{}", o.line())?;
            out.flush()?;
        }
        outcomes.push(o);
    }
    if args.json {
        write_json(out, &serde_json::json!({ "schema_version": SCHEMA_VERSION, "outcomes": outcomes }))?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Verification(failed, outcomes.len()));
    }
    Ok(())
}
