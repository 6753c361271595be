//! Command-line front end: figure data, phase-shift sweeps, spectra and wave
//! functions as CSV or JSON.
//!
//! Exit codes: `0` success, `2` bad arguments, `3` solver failure. Output files are
//! written only after every row has been computed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::Error;
use crate::exactref::{exact_levels_matching, exact_wavefunction};
use crate::freescatter::{calibrate_depth, scattering_length_pow, StepWell};
use crate::quad::trapezoid;
use crate::roots::uniform_grid;
use crate::trapsolver::{pseudo_wavefunction, self_consistent_levels, SelfConsistentLevel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Residual above which pseudo levels are only written with `--allow-loose`.
pub const LOOSE_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "deltashell", version, about = "Delta-shell pseudopotential spectra in a harmonic trap")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and pseudopotential levels versus well range, depth calibrated to E_b.
    Fig1(Fig1Args),
    /// Phase shift and energy-dependent scattering length on an energy grid.
    PhaseShift(PhaseShiftArgs),
    /// Self-consistent pseudopotential spectrum next to the exact one.
    Spectrum(SpectrumArgs),
    /// Pseudo and exact reduced wave functions of one level.
    Wavefunction(WavefunctionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    B,
    C,
    D,
}

impl Panel {
    pub fn l(self) -> usize {
        match self {
            Panel::B => 0,
            Panel::C => 1,
            Panel::D => 2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
    /// JSON file whose keys mirror the long flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Emit pseudo levels whose residual exceeds 1e-8.
    #[arg(long)]
    pub allow_loose: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    #[arg(long, value_enum)]
    pub panel: Option<Panel>,
    /// Partial wave; overrides the panel.
    #[arg(short, long)]
    pub l: Option<usize>,
    /// Comma-separated well ranges.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub d_grid: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub eb: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WellArgs {
    #[arg(short, long)]
    pub l: Option<usize>,
    /// Well depth V0; calibrated to E_b when omitted.
    #[arg(long)]
    pub depth: Option<f64>,
    #[arg(long)]
    pub range: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eb: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseShiftArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Comma-separated energies; must not contain 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 0..)]
    pub e_grid: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    #[arg(long)]
    pub e_step: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Rank of the level inside the energy window, lowest first.
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_step: Option<f64>,
    /// Shell radius of the pseudo wave function.
    #[arg(long)]
    pub s: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub panel: Option<Panel>,
    pub l: Option<usize>,
    pub d_grid: Option<Vec<f64>>,
    pub eb: Option<f64>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub e_step: Option<f64>,
    pub e_grid: Option<Vec<f64>>,
    pub depth: Option<f64>,
    pub range: Option<f64>,
    pub level: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_step: Option<f64>,
    pub s: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub allow_loose: Option<bool>,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub l: usize,
    pub d_grid: Vec<f64>,
    pub well: Option<StepWell>,
    pub e_b: f64,
    pub e_window: (f64, f64),
    pub e_grid: Vec<f64>,
    pub level: usize,
    pub r_grid: Vec<f64>,
    pub s: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub allow_loose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fig1,
    PhaseShift,
    Spectrum,
    Wavefunction,
}

pub const DEFAULT_EB: f64 = -2.0;
pub const DEFAULT_WINDOW: (f64, f64) = (-10.0, 14.0);
pub const DEFAULT_S: f64 = 1e-3;
pub const DEFAULT_RANGE: f64 = 0.4;

/// Failure carrying the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn solver(message: impl Into<String>) -> Self {
        CliError { code: EXIT_SOLVER, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } => CliError::usage(e.to_string()),
            _ => CliError::solver(e.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, CliError> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn window(lo: Option<f64>, hi: Option<f64>, cfg: &ConfigFile) -> Result<(f64, f64), CliError> {
    let lo = lo.or(cfg.e_min).unwrap_or(DEFAULT_WINDOW.0);
    let hi = hi.or(cfg.e_max).unwrap_or(DEFAULT_WINDOW.1);
    if !(lo < hi && lo >= -40.0 && hi <= 40.0) {
        return Err(CliError::usage(format!("energy window [{lo}, {hi}] must be an interval inside [-40, 40]")));
    }
    Ok((lo, hi))
}

fn resolve_well(args: &WellArgs, cfg: &ConfigFile) -> Result<(usize, StepWell, f64), CliError> {
    let l = args.l.or(cfg.l).unwrap_or(1);
    let e_b = args.eb.or(cfg.eb).unwrap_or(DEFAULT_EB);
    let range = args.range.or(cfg.range).unwrap_or(DEFAULT_RANGE);
    let depth = match args.depth.or(cfg.depth) {
        Some(v) => v,
        None => calibrate_depth(l, range, e_b)?,
    };
    Ok((l, StepWell::new(depth, range)?, e_b))
}

fn common(c: &CommonArgs, cfg: &ConfigFile) -> (Option<PathBuf>, Format, bool) {
    let format = if c.json { Format::Json } else { c.format.or(cfg.format).unwrap_or(Format::Csv) };
    let output = c.output.clone().or_else(|| cfg.output.clone());
    (output, format, c.allow_loose || cfg.allow_loose.unwrap_or(false))
}

impl RunConfig {
    /// Merges flags, the optional config file and defaults, in that order of
    /// precedence, and validates the result.
    pub fn resolve(command: &Command) -> Result<Self, CliError> {
        let base = |kind, l, common_args: &CommonArgs, cfg: &ConfigFile| {
            let (output, format, allow_loose) = common(common_args, cfg);
            RunConfig {
                command: kind,
                l,
                d_grid: Vec::new(),
                well: None,
                e_b: DEFAULT_EB,
                e_window: DEFAULT_WINDOW,
                e_grid: Vec::new(),
                level: 0,
                r_grid: Vec::new(),
                s: DEFAULT_S,
                output,
                format,
                allow_loose,
            }
        };
        match command {
            Command::Fig1(a) => {
                let cfg = load_config(a.common.config.as_deref())?;
                let l = a.l.or(cfg.l).or(a.panel.or(cfg.panel).map(Panel::l)).unwrap_or(1);
                let d_grid = a
                    .d_grid
                    .clone()
                    .or_else(|| cfg.d_grid.clone())
                    .unwrap_or_else(|| (1..=16).map(|i| 0.05 * i as f64).collect());
                if d_grid.is_empty() {
                    return Err(CliError::usage("d-grid is empty"));
                }
                if let Some(d) = d_grid.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
                    return Err(CliError::usage(format!("range {d} outside (0, 1]")));
                }
                let e_b = a.eb.or(cfg.eb).unwrap_or(DEFAULT_EB);
                if !(e_b < 0.0) {
                    return Err(CliError::usage(format!("E_b = {e_b} must be negative")));
                }
                let mut rc = base(CommandKind::Fig1, l, &a.common, &cfg);
                rc.d_grid = d_grid;
                rc.e_b = e_b;
                rc.e_window = window(a.e_min, a.e_max, &cfg)?;
                Ok(rc)
            }
            Command::PhaseShift(a) => {
                let cfg = load_config(a.common.config.as_deref())?;
                let (l, well, e_b) = resolve_well(&a.well, &cfg)?;
                let e_grid = match a.e_grid.clone().or_else(|| cfg.e_grid.clone()) {
                    Some(g) => {
                        if g.is_empty() || g.iter().any(|&e| e == 0.0 || !e.is_finite()) {
                            return Err(CliError::usage("energy grid must be non-empty, finite and exclude 0"));
                        }
                        g
                    }
                    None => {
                        let (lo, hi) = window(a.e_min, a.e_max, &cfg)?;
                        let step = a.e_step.or(cfg.e_step).unwrap_or(0.05);
                        if !(step > 0.0) {
                            return Err(CliError::usage("e-step must be positive"));
                        }
                        let scale = lo.abs().max(hi.abs());
                        uniform_grid(lo, hi, step).into_iter().filter(|e| e.abs() > 1e-12 * scale).collect()
                    }
                };
                let mut rc = base(CommandKind::PhaseShift, l, &a.common, &cfg);
                rc.well = Some(well);
                rc.e_b = e_b;
                rc.e_grid = e_grid;
                Ok(rc)
            }
            Command::Spectrum(a) => {
                let cfg = load_config(a.common.config.as_deref())?;
                let (l, well, e_b) = resolve_well(&a.well, &cfg)?;
                let mut rc = base(CommandKind::Spectrum, l, &a.common, &cfg);
                rc.well = Some(well);
                rc.e_b = e_b;
                rc.e_window = window(a.e_min, a.e_max, &cfg)?;
                Ok(rc)
            }
            Command::Wavefunction(a) => {
                let cfg = load_config(a.common.config.as_deref())?;
                let (l, well, e_b) = resolve_well(&a.well, &cfg)?;
                let s = a.s.or(cfg.s).unwrap_or(DEFAULT_S);
                if !(s > 0.0 && s <= 1e-2) {
                    return Err(CliError::usage(format!("shell radius {s} outside (0, 1e-2]")));
                }
                let r_min = a.r_min.or(cfg.r_min).unwrap_or(0.005);
                let r_max = a.r_max.or(cfg.r_max).unwrap_or(6.0);
                let r_step = a.r_step.or(cfg.r_step).unwrap_or(0.005);
                if !(r_min > 0.0 && r_max > r_min && r_step > 0.0) {
                    return Err(CliError::usage("radial grid needs 0 < r-min < r-max and r-step > 0"));
                }
                let mut rc = base(CommandKind::Wavefunction, l, &a.common, &cfg);
                rc.well = Some(well);
                rc.e_b = e_b;
                rc.e_window = window(a.e_min, a.e_max, &cfg)?;
                rc.level = a.level.or(cfg.level).unwrap_or(0);
                rc.r_grid = uniform_grid(r_min, r_max, r_step);
                rc.s = s;
                Ok(rc)
            }
        }
    }
}

/// One table cell: integers stay integers, reals are printed with 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

/// C-style `%.12g`, with `inf`, `-inf` and `nan` spelled out.
pub fn format_g(x: f64) -> String {
    format_g_prec(x, 12)
}

fn format_g_prec(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", prec - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= prec as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        let decimals = (prec as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

impl Cell {
    fn text(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_g(x),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(i) => Value::from(i),
            Cell::Real(x) => {
                let text = format_g(x);
                if x.is_finite() {
                    Value::from(text.parse::<f64>().expect("formatted number parses"))
                } else {
                    Value::from(text)
                }
            }
        }
    }
}

/// Column names plus rows, rendered as CSV or as a JSON array of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::text).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON rendering");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn check_residuals(levels: &[SelfConsistentLevel], allow_loose: bool) -> Result<(), CliError> {
    if allow_loose {
        return Ok(());
    }
    if let Some(bad) = levels.iter().find(|lv| !(lv.residual <= LOOSE_RESIDUAL)) {
        return Err(CliError::solver(format!(
            "pseudo level at E = {} has residual {:.3e} > {LOOSE_RESIDUAL:e} (use --allow-loose)",
            bad.level.energy, bad.residual
        )));
    }
    Ok(())
}

/// Energy window for the exact solver, which cannot start below the well bottom.
fn exact_window(well: &StepWell, w: (f64, f64)) -> (f64, f64) {
    (w.0.max(-well.depth), w.1)
}

fn fig1(rc: &RunConfig) -> Result<Table, CliError> {
    let l = rc.l;
    let per_d: Vec<Result<Vec<Vec<Cell>>, CliError>> = rc
        .d_grid
        .par_iter()
        .map(|&d| {
            let depth = calibrate_depth(l, d, rc.e_b)?;
            let well = StepWell::new(depth, d)?;
            let exact = exact_levels_matching(l, &well, exact_window(&well, rc.e_window))?;
            let pseudo = self_consistent_levels(l, &well, rc.e_window)?;
            check_residuals(&pseudo, rc.allow_loose)?;
            Ok(exact
                .iter()
                .zip(&pseudo)
                .map(|(x, p)| {
                    vec![
                        Cell::Int(l as i64),
                        Cell::Real(d),
                        Cell::Real(depth),
                        Cell::Int(p.level.branch),
                        Cell::Real(x.energy),
                        Cell::Real(p.level.energy),
                        Cell::Real(p.level.energy - x.energy),
                        Cell::Real(p.residual),
                    ]
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_d {
        rows.extend(r?);
    }
    let key = |row: &Vec<Cell>| match (row[1], row[4]) {
        (Cell::Real(d), Cell::Real(e)) => (d, e),
        _ => unreachable!("fig1 rows hold reals in the d and E_exact columns"),
    };
    rows.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    Ok(Table { columns: vec!["l", "d", "V0", "branch", "E_exact", "E_pseudo", "delta", "residual"], rows })
}

fn phase_shift(rc: &RunConfig) -> Result<Table, CliError> {
    let well = rc.well.expect("phase-shift has a well");
    let rows = rc
        .e_grid
        .par_iter()
        .map(|&e| {
            let p = scattering_length_pow(rc.l, &well, e)?;
            Ok(vec![
                Cell::Real(e),
                Cell::Real((2.0 * e.abs()).sqrt()),
                Cell::Real(p.tan_or_t.value()),
                Cell::Real(p.a_pow),
                Cell::Real(p.a_signed),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table { columns: vec!["E", "k", "tan_or_t", "a_pow", "a_signed"], rows })
}

fn spectrum(rc: &RunConfig) -> Result<Table, CliError> {
    let well = rc.well.expect("spectrum has a well");
    let pseudo = self_consistent_levels(rc.l, &well, rc.e_window)?;
    check_residuals(&pseudo, rc.allow_loose)?;
    let exact = exact_levels_matching(rc.l, &well, exact_window(&well, rc.e_window))?;
    let rows = pseudo
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let e_exact = exact.get(i).map_or(f64::NAN, |x| x.energy);
            vec![
                Cell::Int(p.level.branch),
                Cell::Real(p.level.energy),
                Cell::Real(p.a_pow_at_e),
                Cell::Real(p.residual),
                Cell::Real(e_exact),
                Cell::Real((p.level.energy - e_exact).abs()),
            ]
        })
        .collect();
    Ok(Table { columns: vec!["branch", "E_pseudo", "a_pow", "residual", "E_exact", "abs_delta"], rows })
}

/// Pseudo wave function rescaled to the exact one outside the well and sign-aligned
/// at the first antinode of the exact function beyond `d`.
pub fn aligned_pseudo(r: &[f64], pseudo: &[f64], exact: &[f64], d: f64) -> Vec<f64> {
    let start = r.iter().position(|&x| x > d).unwrap_or(r.len());
    let outside = |u: &[f64]| -> f64 {
        if r.len() - start < 2 {
            return 0.0;
        }
        let sq: Vec<f64> = u[start..].iter().map(|v| v * v).collect();
        trapezoid(&r[start..], &sq)
    };
    let (np, ne) = (outside(pseudo), outside(exact));
    let scale = if np > 0.0 { (ne / np).sqrt() } else { 1.0 };
    let antinode = (start + 1..r.len().saturating_sub(1))
        .find(|&i| exact[i].abs() >= exact[i - 1].abs() && exact[i].abs() >= exact[i + 1].abs())
        .unwrap_or(start.min(r.len() - 1));
    let sign = if pseudo[antinode] * exact[antinode] < 0.0 { -1.0 } else { 1.0 };
    pseudo.iter().map(|v| sign * scale * v).collect()
}

fn wavefunction(rc: &RunConfig) -> Result<Table, CliError> {
    let well = rc.well.expect("wavefunction has a well");
    let pseudo = self_consistent_levels(rc.l, &well, rc.e_window)?;
    check_residuals(&pseudo, rc.allow_loose)?;
    let exact = exact_levels_matching(rc.l, &well, exact_window(&well, rc.e_window))?;
    let (Some(p), Some(x)) = (pseudo.get(rc.level), exact.get(rc.level)) else {
        return Err(CliError::usage(format!(
            "level index {} out of range: {} pseudo and {} exact levels in the window",
            rc.level,
            pseudo.len(),
            exact.len()
        )));
    };
    let up = pseudo_wavefunction(&p.level, rc.s, &rc.r_grid)?;
    let ue = exact_wavefunction(rc.l, &well, x.energy, &rc.r_grid)?;
    let up: Vec<f64> = up.iter().map(|w| w.u).collect();
    let ue: Vec<f64> = ue.iter().map(|w| w.u).collect();
    let up = aligned_pseudo(&rc.r_grid, &up, &ue, well.range);
    let rows = rc
        .r_grid
        .iter()
        .zip(up.iter().zip(&ue))
        .map(|(&r, (&a, &b))| vec![Cell::Real(r), Cell::Real(a), Cell::Real(b)])
        .collect();
    Ok(Table { columns: vec!["r", "u_pseudo", "u_exact"], rows })
}

/// Computes the table for a resolved configuration.
pub fn run(rc: &RunConfig) -> Result<Table, CliError> {
    match rc.command {
        CommandKind::Fig1 => fig1(rc),
        CommandKind::PhaseShift => phase_shift(rc),
        CommandKind::Spectrum => spectrum(rc),
        CommandKind::Wavefunction => wavefunction(rc),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::usage(format!("stdout: {e}"))),
        Some(p) => fs::write(p, text).map_err(|e| {
            let _ = fs::remove_file(p);
            CliError::usage(format!("{}: {e}", p.display()))
        }),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = RunConfig::resolve(&cli.command).and_then(|rc| {
        let table = run(&rc)?;
        write_output(rc.output.as_deref(), &table.render(rc.format))
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("deltashell: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_c() {
        assert_eq!(format_g(34.95), "34.95");
        assert_eq!(format_g(-2.0), "-2");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g(1.5e-5), "1.5e-05");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(123456789012.0), "123456789012");
        assert_eq!(format_g(1234567890123.0), "1.23456789012e+12");
        assert_eq!(format_g(f64::INFINITY), "inf");
        assert_eq!(format_g(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_g(9.9999999999999e-1), "1");
    }

    #[test]
    fn panel_maps_to_partial_wave() {
        assert_eq!(Panel::B.l(), 0);
        assert_eq!(Panel::C.l(), 1);
        assert_eq!(Panel::D.l(), 2);
    }

    #[test]
    fn json_cells_round_trip_text() {
        let t = Table {
            columns: vec!["a", "b", "c"],
            rows: vec![vec![Cell::Int(3), Cell::Real(0.1 + 0.2), Cell::Real(f64::INFINITY)]],
        };
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["a"], 3);
        assert_eq!(v[0]["b"].as_f64().unwrap(), 0.3);
        assert_eq!(v[0]["c"], "inf");
        assert_eq!(t.to_csv(), "a,b,c\n3,0.3,inf\n");
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"bogus": 1}"#).is_err());
        let c: ConfigFile = serde_json::from_str(r#"{"d-grid": [0.1, 0.2], "eb": -1.5}"#).unwrap();
        assert_eq!(c.d_grid.unwrap(), vec![0.1, 0.2]);
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("deltashell-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        fs::write(&path, r#"{"l": 2, "d-grid": [0.3], "e-max": 9}"#).unwrap();
        let cli = Cli::try_parse_from([
            "deltashell",
            "fig1",
            "--config",
            path.to_str().unwrap(),
            "--l",
            "0",
        ])
        .unwrap();
        let rc = RunConfig::resolve(&cli.command).unwrap();
        assert_eq!(rc.l, 0);
        assert_eq!(rc.d_grid, vec![0.3]);
        assert_eq!(rc.e_window, (-10.0, 9.0));
        fs::remove_dir_all(&dir).unwrap();
    }
}
