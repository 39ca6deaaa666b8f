//! Front end for `turnpike-core`: parses a run configuration, runs one
//! command, and writes CSV tables plus a JSON report into the output directory.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use turnpike_core::certify::{
    check_cost_optimality, check_decay, check_similarity, check_terminal, check_turnpike, cost,
    cost_with_steady_state, euler_lagrange_residual, perturbation_from_interior, CertificateKind,
    CertificateReport, Tolerances,
};
use turnpike_core::explicit::{
    hum_control, infinite_horizon_control, optimal_control, similarity_weight, steady_state_shift,
    weight_from_lambda, ControlSignal, Weight,
};
use turnpike_core::io::{read_datum_csv, write_control_csv, write_grid_csv, write_snapshot_csv, write_table};
use turnpike_core::modal::{modal_turnpike_run, ModeBatch, ModeInput};
use turnpike_core::oracle::{class_qp, dump_class_kkt, oracle_report, oracle_solution};
use turnpike_core::wavecore::{
    boundary_trace, build_f, energy, evaluate_state, propagate_alpha, AlphaProfile, GridFunction,
    Horizon, InitialData,
};

pub const SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] turnpike_core::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "turnpike", version, about = "Optimal Neumann boundary control of the 1D wave equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Closed-form optimal control and its components.
    Explicit,
    /// Control, state traces, energy and snapshots.
    Simulate,
    /// Terminal, Euler–Lagrange, turnpike, decay and cost certificates.
    Certify,
    /// Rebuild the optimum by per-class quadratic programs and compare.
    Oracle,
    /// Minimal-norm control against the infinite-horizon optimum at λ = 1 − (1 − 2/T)².
    Similarity,
    /// Mode-by-mode optimality system and turnpike inequality.
    Modal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Datum {
    /// y0 = 4 sin(πx/2), y1 = 0.
    Sine,
    /// y0 = x, y1 = 0.
    Linear,
    Zero,
    /// CSV with columns x,y0,dy0,y1 at the cell midpoints.
    File,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Weight λ in [0, 1]; decimals or fractions such as 24/25.
    #[arg(long, global = true, default_value = "1/2")]
    pub lambda: String,
    /// Horizon: a positive even integer, or `inf`.
    #[arg(long = "T", global = true, default_value = "20")]
    pub horizon: String,
    /// Windows kept for T = inf (default: until |z|^K ≤ 1e-14).
    #[arg(long = "K", global = true)]
    pub windows: Option<usize>,
    /// Samples per unit length.
    #[arg(long, global = true, default_value_t = 512)]
    pub m: usize,
    #[arg(long, global = true, value_enum, default_value_t = Datum::Sine)]
    pub datum: Datum,
    #[arg(long = "datum-file", global = true)]
    pub datum_file: Option<PathBuf>,
    /// Steady state σx to track instead of rest.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, global = true, env = "TURNPIKE_OUT", default_value = "turnpike-out")]
    pub out: PathBuf,
    #[arg(long = "tol-exact", global = true, default_value_t = 1e-10)]
    pub tol_exact: f64,
    #[arg(long = "tol-quad", global = true, default_value_t = 1e-5)]
    pub tol_quad: f64,
    /// Write the KKT system of this sample class (oracle).
    #[arg(long = "dump-kkt", global = true)]
    pub dump_kkt: Option<usize>,
    /// Mode batch JSON (modal).
    #[arg(long, global = true)]
    pub modes: Option<PathBuf>,
    /// Decay margin ω (modal; falls back to the batch file).
    #[arg(long, global = true)]
    pub omega: Option<f64>,
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: f64,
    pub horizon: HorizonSpec,
    pub windows: Option<usize>,
    pub m: usize,
    pub datum: Datum,
    pub datum_path: Option<PathBuf>,
    pub sigma: f64,
    pub out_dir: PathBuf,
    pub tolerances: Tolerances,
    pub dump_kkt: Option<usize>,
    pub modes: Option<PathBuf>,
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HorizonSpec {
    Finite(f64),
    Infinite,
}

impl HorizonSpec {
    fn json(&self) -> Value {
        match self {
            HorizonSpec::Finite(t) => json!(t),
            HorizonSpec::Infinite => json!("inf"),
        }
    }
}

/// `"p/q"` or a decimal.
pub fn parse_real(s: &str) -> Result<f64> {
    let bad = || CliError::Config(format!("cannot parse {s:?} as a number"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

pub fn parse_horizon(s: &str) -> Result<HorizonSpec> {
    if s.trim().eq_ignore_ascii_case("inf") {
        return Ok(HorizonSpec::Infinite);
    }
    let t = parse_real(s)?;
    Horizon::finite(t).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(HorizonSpec::Finite(t))
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let o = &cli.opts;
        let lambda = parse_real(&o.lambda)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(CliError::Config(format!("λ = {lambda} outside [0, 1]")));
        }
        if o.m == 0 {
            return Err(CliError::Config("m must be positive".into()));
        }
        if o.datum == Datum::File && o.datum_file.is_none() {
            return Err(CliError::Config("--datum file needs --datum-file".into()));
        }
        if !o.sigma.is_finite() {
            return Err(CliError::Config("σ must be finite".into()));
        }
        if !(o.tol_exact > 0.0 && o.tol_quad > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        if o.windows == Some(0) {
            return Err(CliError::Config("K must be positive".into()));
        }
        Ok(Self {
            command: cli.command,
            lambda,
            horizon: parse_horizon(&o.horizon)?,
            windows: o.windows,
            m: o.m,
            datum: o.datum,
            datum_path: o.datum_file.clone(),
            sigma: o.sigma,
            out_dir: o.out.clone(),
            tolerances: Tolerances { exact: o.tol_exact, quad: o.tol_quad },
            dump_kkt: o.dump_kkt,
            modes: o.modes.clone(),
            omega: o.omega,
        })
    }

    fn finite_t(&self) -> Result<f64> {
        match self.horizon {
            HorizonSpec::Finite(t) => Ok(t),
            HorizonSpec::Infinite => Err(CliError::Config(format!(
                "`{}` needs a finite horizon",
                command_name(self.command)
            ))),
        }
    }

    fn weight(&self) -> Result<Weight> {
        Ok(weight_from_lambda(self.lambda)?)
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Explicit => "explicit",
        Command::Simulate => "simulate",
        Command::Certify => "certify",
        Command::Oracle => "oracle",
        Command::Similarity => "similarity",
        Command::Modal => "modal",
    }
}

pub fn load_datum(cfg: &RunConfig) -> Result<InitialData> {
    Ok(match cfg.datum {
        Datum::Sine => InitialData::sine(cfg.m)?,
        Datum::Linear => InitialData::linear(cfg.m, 1.0)?,
        Datum::Zero => InitialData::zero(cfg.m)?,
        Datum::File => {
            let path = cfg.datum_path.as_ref().ok_or_else(|| CliError::Config("no datum file".into()))?;
            read_datum_csv(path)?
        }
    })
}

/// JSON report written as `report.json`.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Command,
    pub config: Value,
    pub pass: bool,
    pub certificates: Vec<CertificateReport>,
    pub summary: BTreeMap<String, Value>,
    pub files: Vec<String>,
}

struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Output(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Outcome of a run: the report, already written to disk.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub report_path: PathBuf,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Output::new(&cfg.out_dir)?;
    let mut summary = BTreeMap::new();
    let certificates = match cfg.command {
        Command::Explicit => run_explicit(cfg, &mut out, &mut summary)?,
        Command::Simulate => run_simulate(cfg, &mut out, &mut summary)?,
        Command::Certify => run_certify(cfg, &mut summary)?,
        Command::Oracle => run_oracle(cfg, &mut out, &mut summary)?,
        Command::Similarity => run_similarity(cfg, &mut out, &mut summary)?,
        Command::Modal => run_modal(cfg, &mut out, &mut summary)?,
    };
    let report_path = out.path("report.json");
    let report = Report {
        schema: SCHEMA,
        command: cfg.command,
        config: config_json(cfg),
        pass: certificates.iter().all(|c| c.pass),
        certificates,
        summary,
        files: out.files.clone(),
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    std::fs::write(&report_path, text)?;
    Ok(Outcome { report, report_path })
}

fn config_json(cfg: &RunConfig) -> Value {
    json!({
        "lambda": cfg.lambda,
        "T": cfg.horizon.json(),
        "K": cfg.windows,
        "m": cfg.m,
        "datum": cfg.datum,
        "datum_path": cfg.datum_path.as_ref().map(|p| p.display().to_string()),
        "sigma": cfg.sigma,
        "tolerances": {"exact": cfg.tolerances.exact, "quad": cfg.tolerances.quad},
    })
}

/// Control for the (shifted) zero-target problem.
fn control_for(cfg: &RunConfig, shifted: &InitialData) -> Result<ControlSignal> {
    let w = cfg.weight()?;
    Ok(match cfg.horizon {
        HorizonSpec::Finite(t) => optimal_control(shifted, &w, Horizon::finite(t)?)?,
        HorizonSpec::Infinite => infinite_horizon_control(shifted, &w, cfg.windows)?,
    })
}

fn run_explicit(
    cfg: &RunConfig,
    out: &mut Output,
    summary: &mut BTreeMap<String, Value>,
) -> Result<Vec<CertificateReport>> {
    let init = load_datum(cfg)?;
    let shifted = steady_state_shift(&init, cfg.sigma)?;
    let u = control_for(cfg, &shifted)?;
    write_control_csv(&out.path("control.csv"), &u.offset(cfg.sigma)?)?;
    if let Some(meta) = u.meta() {
        if let Some(fp) = &meta.f_plus {
            write_grid_csv(&out.path("f_plus.csv"), fp)?;
        }
        if let Some(fm) = &meta.f_minus {
            write_grid_csv(&out.path("f_minus.csv"), fm)?;
        }
    }
    if let Some(meta) = u.meta_summary() {
        out.json("control_meta.json", &meta)?;
        summary.insert("z".into(), json!(meta.z));
        summary.insert("truncation_capped".into(), json!(meta.truncation_capped));
    }
    summary.insert("windows".into(), json!(u.horizon().windows()));
    summary.insert("control_norm".into(), json!(u.norm()));
    summary.insert("control_max_abs".into(), json!(u.max_abs()));
    Ok(Vec::new())
}

fn run_simulate(
    cfg: &RunConfig,
    out: &mut Output,
    summary: &mut BTreeMap<String, Value>,
) -> Result<Vec<CertificateReport>> {
    let init = load_datum(cfg)?;
    let shifted = steady_state_shift(&init, cfg.sigma)?;
    let u = control_for(cfg, &shifted)?;
    // The physical boundary value σ + u drives the unshifted state.
    let applied = u.offset(cfg.sigma)?;
    let alpha = propagate_alpha(&build_f(&init)?, &applied)?;
    let end = alpha.horizon().end();

    write_control_csv(&out.path("control.csv"), &applied)?;
    write_control_csv(&out.path("boundary_trace.csv"), &boundary_trace(&alpha)?)?;

    let m = cfg.m;
    let h = alpha.step();
    let stride = (m / 32).max(1);
    let nodes = (end * m as f64).round() as usize;
    let energies = (0..=nodes)
        .step_by(stride)
        .map(|p| Ok(vec![p as f64 * h, energy(&alpha, p as f64 * h)?]))
        .collect::<Result<Vec<_>>>()?;
    write_table(&out.path("energy.csv"), &["t", "energy"], energies)?;

    let xstride = (m / 32).max(1);
    let mut grid = Vec::new();
    for p in (0..=nodes).step_by(stride) {
        let s = evaluate_state(&alpha, p as f64 * h)?;
        for j in (0..m).step_by(xstride) {
            grid.push(vec![s.t, s.yx.point(j), s.yx.values()[j]]);
        }
    }
    write_table(&out.path("dxy.csv"), &["t", "x", "yx"], grid)?;

    let mid = ((nodes / 2) as f64) * h;
    for (name, t) in [("snapshot_t0.csv", 0.0), ("snapshot_mid.csv", mid), ("snapshot_end.csv", end)] {
        write_snapshot_csv(&out.path(name), &evaluate_state(&alpha, t)?)?;
    }

    let j = cost_with_steady_state(&alpha, &u, cfg.lambda, cfg.sigma)?;
    summary.insert("cost".into(), json!(j));
    summary.insert("energy_start".into(), json!(energy(&alpha, 0.0)?));
    summary.insert("energy_mid".into(), json!(energy(&alpha, mid)?));
    summary.insert("energy_end".into(), json!(energy(&alpha, end)?));
    summary.insert("t_end".into(), json!(end));

    let mut certs = Vec::new();
    if let HorizonSpec::Finite(t) = cfg.horizon {
        let shifted_alpha = propagate_alpha(&build_f(&shifted)?, &u)?;
        certs.push(check_terminal(&shifted_alpha, t, cfg.tolerances.exact)?);
    }
    if cfg.datum == Datum::Sine && cfg.sigma == 0.0 {
        certs.push(sine_energy_check(&alpha, cfg.tolerances.quad)?);
    }
    Ok(certs)
}

/// The sine datum has `E(0) = ∫₀¹ (2π cos(πx/2))² dx = 2π²`.
fn sine_energy_check(alpha: &AlphaProfile, tol: f64) -> Result<CertificateReport> {
    let e0 = energy(alpha, 0.0)?;
    let exact = 2.0 * PI * PI;
    Ok(CertificateReport::new(CertificateKind::Energy, (e0 - exact).abs() / exact, tol)
        .with("energy", e0)
        .with("reference", exact))
}

fn run_certify(cfg: &RunConfig, summary: &mut BTreeMap<String, Value>) -> Result<Vec<CertificateReport>> {
    let tol = cfg.tolerances.exact;
    let init = load_datum(cfg)?;
    let shifted = steady_state_shift(&init, cfg.sigma)?;
    let u = control_for(cfg, &shifted)?;
    let w = cfg.weight()?;
    let alpha = propagate_alpha(&build_f(&shifted)?, &u)?;
    summary.insert("z".into(), json!(w.z()));
    summary.insert("cost".into(), json!(cost(&alpha, &u, cfg.lambda)?));

    let mut certs = Vec::new();
    match cfg.horizon {
        HorizonSpec::Finite(t) => {
            certs.push(check_terminal(&alpha, t, tol)?);
            if alpha.windows().len() >= 3 {
                certs.push(euler_lagrange_residual(&alpha, cfg.lambda, tol)?);
            }
            if cfg.lambda < 1.0 {
                certs.push(check_turnpike(&alpha, &w, t, None, tol)?);
            }
            certs.push(check_cost_optimality(&shifted, &u, cfg.lambda, &perturbations(&shifted, &u, t)?, tol)?);
        }
        HorizonSpec::Infinite => {
            certs.push(check_decay(&alpha, w.z(), tol)?);
            if alpha.windows().len() >= 3 {
                certs.push(euler_lagrange_residual(&alpha, cfg.lambda, tol)?);
            }
        }
    }
    Ok(certs)
}

/// Differences to the minimal-norm control and smooth interior α′ bumps,
/// at a few amplitudes.
fn perturbations(init: &InitialData, u: &ControlSignal, t: f64) -> Result<Vec<ControlSignal>> {
    let horizon = Horizon::finite(t)?;
    let n = horizon.windows();
    let mut dirs = Vec::new();
    let hum = hum_control(init, t)?;
    dirs.push(hum.zip_with(u, |a, b| a - b)?);
    if n >= 2 {
        let mw = u.window_len();
        for freq in 1..=3 {
            let interior = (1..n)
                .map(|j| {
                    GridFunction::from_fn(0.0, 2.0, mw, |s| {
                        (freq as f64 * PI * s / 2.0 + j as f64).sin()
                    })
                })
                .collect::<turnpike_core::Result<Vec<_>>>()?;
            dirs.push(perturbation_from_interior(&interior, horizon)?);
        }
    }
    let mut out = Vec::new();
    for d in dirs {
        for eps in [1e-3, -0.1, 1.0] {
            out.push(d.map(|v| eps * v)?);
        }
    }
    Ok(out)
}

fn run_oracle(
    cfg: &RunConfig,
    out: &mut Output,
    summary: &mut BTreeMap<String, Value>,
) -> Result<Vec<CertificateReport>> {
    let t = cfg.finite_t()?;
    let init = steady_state_shift(&load_datum(cfg)?, cfg.sigma)?;
    if let Some(r) = cfg.dump_kkt {
        let qp = class_qp(&init, cfg.lambda, t, r)?;
        dump_class_kkt(&qp, &out.path(&format!("kkt_class_{r}.csv")))?;
    }
    let sol = oracle_solution(&init, cfg.lambda, t)?;
    write_control_csv(&out.path("oracle_control.csv"), &sol.control.offset(cfg.sigma)?)?;
    summary.insert("oracle_cost".into(), json!(sol.cost));
    summary.insert("max_stationarity".into(), json!(sol.max_stationarity));
    let alpha = propagate_alpha(&build_f(&init)?, &sol.control)?;
    Ok(vec![
        oracle_report(&init, cfg.lambda, t, cfg.tolerances.exact)?,
        check_terminal(&alpha, t, cfg.tolerances.exact)?,
    ])
}

fn run_similarity(
    cfg: &RunConfig,
    out: &mut Output,
    summary: &mut BTreeMap<String, Value>,
) -> Result<Vec<CertificateReport>> {
    let t = cfg.finite_t()?;
    let init = steady_state_shift(&load_datum(cfg)?, cfg.sigma)?;
    let w = similarity_weight(t)?;
    let n = Horizon::finite(t)?.windows();
    write_control_csv(&out.path("hum_control.csv"), &hum_control(&init, t)?)?;
    write_control_csv(&out.path("infinite_control.csv"), &infinite_horizon_control(&init, &w, Some(n))?)?;
    summary.insert("lambda".into(), json!(w.lambda()));
    summary.insert("z".into(), json!(w.z()));
    Ok(vec![check_similarity(&init, t, cfg.tolerances.exact)?])
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BatchFile {
    Batch(ModeBatch),
    Modes(Vec<ModeInput>),
}

pub fn load_modes(path: &Path) -> Result<ModeBatch> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: BatchFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("mode batch {}: {e}", path.display())))?;
    Ok(match file {
        BatchFile::Batch(b) => b,
        BatchFile::Modes(modes) => ModeBatch { lambda: None, horizon: None, omega: None, modes },
    })
}

fn run_modal(
    cfg: &RunConfig,
    out: &mut Output,
    summary: &mut BTreeMap<String, Value>,
) -> Result<Vec<CertificateReport>> {
    let path = cfg.modes.as_ref().ok_or_else(|| CliError::Config("modal needs --modes".into()))?;
    let batch = load_modes(path)?;
    // Values in the batch file take precedence over the command line.
    let lambda = batch.lambda.unwrap_or(cfg.lambda);
    let t = match (batch.horizon, cfg.horizon) {
        (Some(t), _) | (None, HorizonSpec::Finite(t)) => t,
        (None, HorizonSpec::Infinite) => return Err(CliError::Config("modal needs a finite T".into())),
    };
    let omega = batch
        .omega
        .or(cfg.omega)
        .ok_or_else(|| CliError::Config("modal needs ω (--omega or in the batch)".into()))?;
    let specs = batch.specs(lambda)?;
    let (report, series) = modal_turnpike_run(&specs, t, omega, 1000)?;
    write_table(
        &out.path("modal_series.csv"),
        &["t", "adjoint_norm", "bound", "control_norm"],
        series.iter().map(|s| vec![s.t, s.adjoint_norm, s.bound, s.control_norm]),
    )?;
    summary.insert("lambda".into(), json!(lambda));
    summary.insert("T".into(), json!(t));
    summary.insert("omega".into(), json!(omega));
    Ok(vec![report])
}

/// Parse, run and report; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            for c in &outcome.report.certificates {
                println!(
                    "{:<15} {}  residual {:.3e}  tolerance {:.1e}",
                    serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
                    if c.pass { "PASS" } else { "FAIL" },
                    c.residual,
                    c.tolerance
                );
            }
            println!("report: {}", outcome.report_path.display());
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
