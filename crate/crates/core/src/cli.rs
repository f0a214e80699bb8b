//! Command-line front end: configuration, subcommands, and report writing.
//!
//! Every data file is a pure function of the configuration, so identical runs
//! produce byte-identical output. Run metadata (including wall-clock time)
//! goes to a separate `manifest.json`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    bopp_shift, build_rep, canonical_commutator_residual, hermiticity_residual, nc_gravity_triviality,
    weyl_identity_residual, weyl_xp2,
};
use crate::classical::eqp_classical_report;
use crate::gravity::eqp_deviation_report;
use crate::nc_shift::shift_report;
use crate::params::PhysicalParams;
use crate::solver::{convergence_study, solve_spectrum, Grid, MIN_GRID_POINTS};
use crate::spectrum::spectrum_table;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;

/// Basis sizes for the single-factor identities.
pub const ALGEBRA_SIZES: [usize; 3] = [8, 16, 32];
/// Basis sizes for the two-factor (N²-dimensional) checks.
pub const TENSOR_SIZES: [usize; 2] = [8, 16];
const GRAVITY_CHECK_SIZE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flat JSON configuration; every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub m: f64,
    pub alpha: f64,
    pub c: f64,
    pub hbar: f64,
    pub p_y: f64,
    pub p_z: f64,
    pub theta: f64,
    pub levels: usize,
    pub grid_points: usize,
    pub zeta_max: f64,
    pub output_dir: PathBuf,
    pub format: Format,
    pub algebra_tolerance: f64,
    pub classical_momenta: Vec<f64>,
    pub classical_duration: f64,
    pub classical_dt: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = PhysicalParams::natural_units();
        RunConfig {
            m: p.m,
            alpha: p.alpha,
            c: p.c,
            hbar: p.hbar,
            p_y: p.p_y,
            p_z: p.p_z,
            theta: p.theta,
            levels: 5,
            grid_points: 6000,
            zeta_max: 60.0,
            output_dir: PathBuf::from("out"),
            format: Format::Csv,
            algebra_tolerance: 1e-9,
            classical_momenta: vec![0.0, 0.1, 0.2],
            classical_duration: 1.0,
            classical_dt: 1e-3,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            m: self.m,
            alpha: self.alpha,
            c: self.c,
            hbar: self.hbar,
            p_y: self.p_y,
            p_z: self.p_z,
            theta: self.theta,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params().validate().map_err(config_error)?;
        if self.levels == 0 {
            return Err(CliError::Config("levels must be at least 1".into()));
        }
        Grid::new(self.zeta_max, self.grid_points).map_err(config_error)?;
        if !(self.algebra_tolerance > 0.0) {
            return Err(CliError::Config("algebra_tolerance must be positive".into()));
        }
        if !(self.classical_dt > 0.0 && self.classical_duration >= self.classical_dt) {
            return Err(CliError::Config(
                "classical_dt must be positive and classical_duration at least classical_dt".into(),
            ));
        }
        Ok(())
    }

    fn grid(&self) -> Result<Grid, CliError> {
        Grid::new(self.zeta_max, self.grid_points).map_err(config_error)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

fn config_error(e: crate::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn solver_error(e: crate::Error) -> CliError {
    CliError::Solver(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "rindler", version, about = "Accelerated-frame quantum spectra and equivalence-principle checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat JSON configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory (overrides the config)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Number of levels
    #[arg(long, global = true)]
    pub levels: Option<usize>,

    /// Finite-difference grid points
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,

    /// Cutoff of the ζ domain
    #[arg(long, global = true)]
    pub zeta_max: Option<f64>,

    /// Residual threshold for verify-algebra
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Analytic spectrum, optionally with the finite-difference check
    Spectrum {
        #[arg(long)]
        numeric: bool,
    },
    /// Accelerated frame versus uniform field, quantum and classical
    Compare,
    /// Noncommutative ground-state shift
    Nc,
    /// Operator identities in truncated matrix representations
    VerifyAlgebra,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Compare => "compare",
            Command::Nc => "nc",
            Command::VerifyAlgebra => "verify-algebra",
        }
    }
}

impl Cli {
    /// Loads the config file (if any) and applies command-line overrides.
    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(k) = self.levels {
            cfg.levels = k;
        }
        if let Some(n) = self.grid_points {
            cfg.grid_points = n;
        }
        if let Some(z) = self.zeta_max {
            cfg.zeta_max = z;
        }
        if let Some(t) = self.tolerance {
            cfg.algebra_tolerance = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Files written and the text shown to the user.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub text: String,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("creating output directory {}: {e}", dir.display())))?;
        Ok(Writer { dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Config(format!("writing {}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    unix_time: u64,
    config: &'a RunConfig,
    files: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<RunOutput, CliError> {
    let cfg = cli.resolve_config()?;
    let mut writer = Writer::new(&cfg.output_dir)?;
    let outcome = match cli.command {
        Command::Spectrum { numeric } => cmd_spectrum(&cfg, numeric, &mut writer),
        Command::Compare => cmd_compare(&cfg, &mut writer),
        Command::Nc => cmd_nc(&cfg, &mut writer),
        Command::VerifyAlgebra => cmd_verify_algebra(&cfg, &mut writer),
    };
    // the manifest is written even when verification fails, so the residual table is traceable
    let text = match &outcome {
        Ok(text) => text.clone(),
        Err(CliError::Verification(text)) => text.clone(),
        Err(e) => return Err(e.clone()),
    };
    let manifest = Manifest {
        command: cli.command.name(),
        version: env!("CARGO_PKG_VERSION"),
        unix_time: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        config: &cfg,
        files: writer
            .files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
    };
    writer.write("manifest.json", &to_json(&manifest))?;
    outcome?;
    Ok(RunOutput {
        files: writer.files,
        text,
    })
}

#[derive(Serialize)]
struct SpectrumLevel {
    n: usize,
    sigma: f64,
    energy: f64,
    spacing: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_error: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumDocument<'a> {
    levels: Vec<SpectrumLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence: Option<&'a crate::solver::ConvergenceStudy>,
}

/// Refinement sequence `N/8, N/4, N/2, N` at fixed cutoff.
fn refinement_grids(cfg: &RunConfig) -> Result<Vec<Grid>, CliError> {
    let n = cfg.grid_points;
    if !n.is_multiple_of(8) || n / 8 < MIN_GRID_POINTS {
        return Err(CliError::Config(format!(
            "--numeric needs grid_points divisible by 8 and at least {}, got {n}",
            8 * MIN_GRID_POINTS
        )));
    }
    [n / 8, n / 4, n / 2, n]
        .iter()
        .map(|&k| Grid::new(cfg.zeta_max, k).map_err(config_error))
        .collect()
}

fn cmd_spectrum(cfg: &RunConfig, numeric: bool, out: &mut Writer) -> Result<String, CliError> {
    let params = cfg.params();
    let rows = spectrum_table(&params, cfg.levels).map_err(solver_error)?;
    let (numeric_levels, study) = if numeric {
        let grids = refinement_grids(cfg)?;
        let levels = solve_spectrum(&params, &cfg.grid()?, cfg.levels).map_err(solver_error)?;
        let study = convergence_study(&grids, cfg.levels).map_err(solver_error)?;
        (Some(levels), Some(study))
    } else {
        (None, None)
    };

    let levels: Vec<SpectrumLevel> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let num = numeric_levels.as_ref().map(|l| l[i]);
            SpectrumLevel {
                n: r.n,
                sigma: r.sigma,
                energy: r.energy,
                spacing: r.spacing,
                sigma_numeric: num.map(|l| l.sigma_numeric),
                energy_numeric: num.map(|l| l.energy_numeric),
                abs_error: num.map(|l| (l.sigma_numeric - r.sigma).abs()),
            }
        })
        .collect();

    let mut text = String::new();
    for l in &levels {
        let _ = write!(text, "n={:<3} sigma={:<5} E={:.10e}", l.n, l.sigma, l.energy);
        if let Some(err) = l.abs_error {
            let _ = write!(text, "  sigma_numeric={:.10} |err|={:.3e}", l.sigma_numeric.unwrap_or(0.0), err);
        }
        text.push('\n');
    }
    if let Some(study) = &study {
        let orders: Vec<String> = study.observed_orders.iter().map(|o| format!("{o:.4}")).collect();
        let _ = writeln!(text, "observed orders: {}", orders.join(", "));
        if study.any_truncation() {
            let _ = writeln!(text, "warning: error dominated by the zeta_max cutoff on some grids");
        }
    }

    match cfg.format {
        Format::Csv => {
            let mut csv = String::from("n,sigma,energy,spacing");
            if numeric {
                csv.push_str(",sigma_numeric,energy_numeric,abs_error");
            }
            csv.push('\n');
            for l in &levels {
                let _ = write!(csv, "{},{:.17e},{:.17e},{:.17e}", l.n, l.sigma, l.energy, l.spacing);
                if let (Some(s), Some(e), Some(a)) = (l.sigma_numeric, l.energy_numeric, l.abs_error) {
                    let _ = write!(csv, ",{s:.17e},{e:.17e},{a:.17e}");
                }
                csv.push('\n');
            }
            out.write("spectrum.csv", &csv)?;
            if let Some(study) = &study {
                out.write("convergence.csv", &study.to_csv())?;
            }
        }
        Format::Json => {
            let doc = SpectrumDocument {
                levels,
                convergence: study.as_ref(),
            };
            out.write("spectrum.json", &to_json(&doc))?;
        }
    }
    Ok(text)
}

fn cmd_compare(cfg: &RunConfig, out: &mut Writer) -> Result<String, CliError> {
    if cfg.levels < 3 {
        return Err(CliError::Config(format!("compare needs at least 3 levels, got {}", cfg.levels)));
    }
    if cfg.classical_momenta.len() < 2 {
        return Err(CliError::Config("classical_momenta needs at least 2 entries".into()));
    }
    let params = cfg.params();
    let quantum = eqp_deviation_report(&params, cfg.levels).map_err(solver_error)?;
    let classical = eqp_classical_report(&params, &cfg.classical_momenta, cfg.classical_duration, cfg.classical_dt)
        .map_err(solver_error)?;
    match cfg.format {
        Format::Csv => {
            out.write("eqp_quantum.csv", &quantum.to_csv())?;
            out.write("eqp_classical.csv", &classical.to_csv())?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Both<'a> {
                quantum: &'a crate::gravity::EqpDeviationReport,
                classical: &'a crate::classical::EqpClassicalReport,
            }
            out.write("compare.json", &to_json(&Both { quantum: &quantum, classical: &classical }))?;
        }
    }
    Ok(quantum.summary() + &classical.summary())
}

fn cmd_nc(cfg: &RunConfig, out: &mut Writer) -> Result<String, CliError> {
    let report = shift_report(&cfg.params()).map_err(solver_error)?;
    match cfg.format {
        Format::Csv => out.write("nc_shift.csv", &report.to_csv())?,
        Format::Json => out.write("nc_shift.json", &(report.to_json() + "\n"))?,
    }
    Ok(report.summary())
}

/// One row of the verify-algebra table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraCheck {
    pub check: String,
    pub n: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Runs every operator identity at the configured `ħ` and `θ`.
pub fn algebra_checks(cfg: &RunConfig) -> crate::Result<Vec<AlgebraCheck>> {
    let tol = cfg.algebra_tolerance;
    let mut rows = Vec::new();
    let mut push = |check: &str, n: usize, residual: f64| {
        rows.push(AlgebraCheck {
            check: check.to_string(),
            n,
            residual,
            tolerance: tol,
            pass: residual <= tol,
        });
    };
    for n in ALGEBRA_SIZES {
        let rep = build_rep(n, cfg.hbar)?;
        push("canonical_commutator", n, canonical_commutator_residual(&rep));
        push("hermitian_x", n, hermiticity_residual(rep.x()));
        push("hermitian_p", n, hermiticity_residual(rep.p()));
        push("weyl_identity", n, weyl_identity_residual(&rep));
        push("weyl_hermitian", n, hermiticity_residual(&weyl_xp2(&rep)));
    }
    for n in TENSOR_SIZES {
        let rep = build_rep(n, cfg.hbar)?;
        let r = bopp_shift(&rep, &rep, cfg.theta)?.residuals();
        push("bopp_x_y", n, r.x_y);
        push("bopp_x_px", n, r.x_px);
        push("bopp_y_py", n, r.y_py);
        push("bopp_x_py", n, r.x_py);
        push("bopp_y_px", n, r.y_px);
        push("bopp_px_py", n, r.px_py);
    }
    let rep = build_rep(GRAVITY_CHECK_SIZE, cfg.hbar)?;
    let g = nc_gravity_triviality(&rep, &rep, cfg.m, cfg.alpha, cfg.theta)?;
    push("gravity_triviality", GRAVITY_CHECK_SIZE, g.max_shift);
    push("gravity_redefined_momentum", GRAVITY_CHECK_SIZE, g.redefined_commutator_residual);
    Ok(rows)
}

fn cmd_verify_algebra(cfg: &RunConfig, out: &mut Writer) -> Result<String, CliError> {
    let rows = algebra_checks(cfg).map_err(solver_error)?;
    match cfg.format {
        Format::Csv => {
            let mut csv = String::from("check,n,residual,tolerance,pass\n");
            for r in &rows {
                let _ = writeln!(csv, "{},{},{:.17e},{:.17e},{}", r.check, r.n, r.residual, r.tolerance, r.pass);
            }
            out.write("algebra.csv", &csv)?;
        }
        Format::Json => out.write("algebra.json", &to_json(&rows))?,
    }
    let mut text = String::new();
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<28} N={:<3} residual={:.3e} {}",
            r.check,
            r.n,
            r.residual,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        let _ = writeln!(text, "{failed} of {} checks exceed tolerance {:e}", rows.len(), cfg.algebra_tolerance);
        return Err(CliError::Verification(text));
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_natural_units() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.params(), PhysicalParams::natural_units());
        assert!(cfg.validate().is_ok());
        assert_eq!(RunConfig::from_json("{}").unwrap(), cfg);
    }

    #[test]
    fn config_parsing() {
        let cfg = RunConfig::from_json(r#"{"alpha": 0.1, "levels": 7, "format": "json"}"#).unwrap();
        assert_eq!(cfg.alpha, 0.1);
        assert_eq!(cfg.levels, 7);
        assert_eq!(cfg.format, Format::Json);
        assert!(RunConfig::from_json(r#"{"alfa": 0.1}"#).is_err());
        let bad = RunConfig::from_json(r#"{"theta": -1.0}"#).unwrap();
        assert_eq!(bad.validate().unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn refinement_sequence() {
        let cfg = RunConfig::default();
        let g = refinement_grids(&cfg).unwrap();
        let n: Vec<usize> = g.iter().map(|g| g.n_points()).collect();
        assert_eq!(n, vec![750, 1500, 3000, 6000]);
        let odd = RunConfig { grid_points: 6001, ..cfg };
        assert!(refinement_grids(&odd).is_err());
    }

    #[test]
    fn algebra_defaults_pass() {
        let rows = algebra_checks(&RunConfig::default()).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        // θ = 0: the Bopp shift is the identity and the commutator deviation is exactly zero
        assert!(rows.iter().filter(|r| r.check == "bopp_x_y").all(|r| r.residual == 0.0));
    }

    #[test]
    fn impossible_tolerance_fails() {
        let cfg = RunConfig {
            algebra_tolerance: 1e-15,
            theta: 0.1,
            ..RunConfig::default()
        };
        assert!(algebra_checks(&cfg).unwrap().iter().any(|r| !r.pass));
    }
}
