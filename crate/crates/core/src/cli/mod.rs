//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when an oracle check fails, 2 on any error.

pub mod config;
pub mod oracle;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::ensemble::{make_time_grid_with_window, run_ensemble_with_threads, EnsembleResult, ExperimentSpec, ModelSpec, Observable, Quantity};
use crate::error::{Error, Result};
use crate::observables::{saturation_time, saturation_value, SaturationTime, TimeSeries};
use crate::xxz::XxzParams;

pub use config::{Command, ModelKind, OutputFormat, RunConfig};
use output::{Cell, Table};

#[derive(Parser, Debug)]
#[command(name = "mbl-superpose", version, about = "Spin-chain dynamics under superposed disorder profiles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Subcommand, Debug)]
pub enum Commands {
    /// l-bit model entanglement growth for N = 1, 2, 10
    LiomDemo(RunArgs),
    /// XXZ entanglement and imbalance dynamics for each Δ and N
    XxzDynamics(RunArgs),
    /// XXZ saturation values and times over disorder strengths
    XxzSaturation(RunArgs),
    /// Free-form run; `--config <output file>` repeats the run that wrote it
    Run(RunArgs),
    /// Cross-check the fast path against independent oracles
    OracleCheck(OracleArgs),
}

/// Every value is taken as text and validated together with config-file
/// entries.
#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Flat `key = value` file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// liom or xxz
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub length: Option<String>,
    #[arg(long)]
    pub coupling_scale: Option<String>,
    #[arg(long)]
    pub xi: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    /// Comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Comma-separated list
    #[arg(long)]
    pub disorder: Option<String>,
    /// open or periodic
    #[arg(long)]
    pub boundary: Option<String>,
    /// Comma-separated list
    #[arg(long)]
    pub n_profiles: Option<String>,
    #[arg(long)]
    pub realizations: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub tmin: Option<String>,
    #[arg(long)]
    pub tmax: Option<String>,
    #[arg(long)]
    pub points_per_decade: Option<String>,
    /// `ti,tf`
    #[arg(long)]
    pub sat_window: Option<String>,
    #[arg(long)]
    pub window_points: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Evolve XXZ chains in the initial magnetization sector (true/false)
    #[arg(long)]
    pub sector: Option<String>,
    #[arg(long)]
    pub threads: Option<String>,
    /// Output directory
    #[arg(long)]
    pub output: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Caption-scale realization counts
    #[arg(long)]
    pub paper_scale: bool,
}

impl RunArgs {
    pub fn entries(&self) -> Vec<(String, String)> {
        let pairs = [
            ("model", &self.model),
            ("length", &self.length),
            ("coupling-scale", &self.coupling_scale),
            ("xi", &self.xi),
            ("g", &self.g),
            ("delta", &self.delta),
            ("disorder", &self.disorder),
            ("boundary", &self.boundary),
            ("n-profiles", &self.n_profiles),
            ("realizations", &self.realizations),
            ("seed", &self.seed),
            ("tmin", &self.tmin),
            ("tmax", &self.tmax),
            ("points-per-decade", &self.points_per_decade),
            ("sat-window", &self.sat_window),
            ("window-points", &self.window_points),
            ("epsilon", &self.epsilon),
            ("sector", &self.sector),
            ("threads", &self.threads),
            ("output", &self.output),
            ("format", &self.format),
        ];
        let mut out: Vec<(String, String)> =
            pairs.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        if self.paper_scale {
            out.push(("paper-scale".into(), "true".into()));
        }
        out
    }
}

#[derive(Args, Debug, Default)]
pub struct OracleArgs {
    #[arg(long, default_value_t = config::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, hide = true)]
    pub corrupt_propagator: bool,
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Commands) -> Result<ExitCode> {
    let (command, args) = match cmd {
        Commands::OracleCheck(a) => return oracle_check(&a),
        Commands::LiomDemo(a) => (Command::LiomDemo, a),
        Commands::XxzDynamics(a) => (Command::XxzDynamics, a),
        Commands::XxzSaturation(a) => (Command::XxzSaturation, a),
        Commands::Run(a) => (Command::Run, a),
    };
    let cfg = RunConfig::resolve(command, args.config.as_deref(), &args.entries())?;
    for path in execute(&cfg)? {
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle_check(args: &OracleArgs) -> Result<ExitCode> {
    let reports = oracle::run_oracle_checks(oracle::OracleOptions {
        seed: args.seed,
        corrupt_propagator: args.corrupt_propagator,
    })?;
    let mut failed = Vec::new();
    for r in &reports {
        let verdict = if r.passed() { "ok" } else { "FAIL" };
        println!("{:<28} max deviation {:.3e} (tolerance {:.0e}) {verdict}", r.name, r.max_deviation, r.tolerance);
        if !r.passed() {
            failed.push(format!("{} ({:.3e})", r.name, r.max_deviation));
        }
    }
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("oracle checks failed: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

/// Runs `cfg` and returns the paths written.
pub fn execute(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match (cfg.command, cfg.model) {
        (Command::LiomDemo, _) | (Command::Run, ModelKind::Liom) => liom_series(cfg),
        (Command::XxzDynamics, _) => write_xxz_series(cfg, &xxz_ensembles(cfg)?),
        (Command::XxzSaturation, _) => write_xxz_saturation(cfg, &xxz_ensembles(cfg)?).map(|p| vec![p]),
        (Command::Run, ModelKind::Xxz) => {
            let runs = xxz_ensembles(cfg)?;
            let mut paths = write_xxz_series(cfg, &runs)?;
            paths.push(write_xxz_saturation(cfg, &runs)?);
            Ok(paths)
        }
    }
}

fn time_grid(cfg: &RunConfig) -> Result<Vec<f64>> {
    make_time_grid_with_window(cfg.tmin, cfg.tmax, cfg.points_per_decade, Some(cfg.sat_window), cfg.window_points)
}

fn run_one(cfg: &RunConfig, model: ModelSpec, n: usize, observables: Vec<Observable>, times: &[f64]) -> Result<EnsembleResult> {
    let spec = ExperimentSpec {
        model,
        n_profiles: n,
        n_realizations: cfg.realizations,
        times: times.to_vec(),
        master_seed: cfg.seed,
        observables,
        sector_reduction: cfg.sector,
    };
    let result = run_ensemble_with_threads(&spec, cfg.threads)?;
    let label = match &spec.model {
        ModelSpec::Xxz(p) => format!("xxz W={} delta={}", p.disorder, p.delta),
        m => m.name().to_string(),
    };
    eprintln!(
        "{label} N={n}: {} realizations in {:.1} s",
        result.metadata.realizations_completed,
        result.metadata.wall_time_s
    );
    Ok(result)
}

fn xxz_model(cfg: &RunConfig, delta: f64, disorder: f64) -> Result<ModelSpec> {
    let params = XxzParams::new(cfg.length, cfg.g, delta, disorder)?.with_boundary(cfg.boundary)?;
    Ok(ModelSpec::Xxz(params))
}

fn annotate(table: &mut Table, result: &EnsembleResult) {
    let m = &result.metadata;
    table.note("realizations_completed", m.realizations_completed);
    table.note("degenerate_realizations", m.degenerate_realizations);
    table.note("degenerate_samples", m.degenerate_samples);
    table.note("success_prob_min", output::format_number(result.success_prob_min));
    table.note("ensemble_reading", &m.ensemble_reading);
}

fn column(result: &EnsembleResult, q: Quantity, sem: bool) -> Result<&[f64]> {
    let v = if sem { result.sem(q) } else { result.mean(q) };
    v.ok_or_else(|| Error::Config(format!("quantity {} was not recorded", q.name())))
}

fn liom_series(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let times = time_grid(cfg)?;
    let model = ModelSpec::Liom { sites: cfg.length, coupling_scale: cfg.coupling_scale, xi: cfg.xi };
    let mut paths = Vec::new();
    for &n in &cfg.n_profiles {
        let r = run_one(cfg, model.clone(), n, vec![Observable::Entropy, Observable::SuccessProb], &times)?;
        let cols = [
            column(&r, Quantity::EntropyVn, false)?,
            column(&r, Quantity::EntropyVn, true)?,
            column(&r, Quantity::SuccessProb, false)?,
        ];
        let mut table = Table::new(vec!["t", "S_vN_mean", "S_vN_sem", "success_prob_mean"]);
        table.note("series", format!("N={n}"));
        annotate(&mut table, &r);
        for (k, &t) in times.iter().enumerate() {
            let mut row = vec![Cell::Num(t)];
            row.extend(cols.iter().map(|c| Cell::Num(c[k])));
            table.rows.push(row);
        }
        paths.push(table.write(cfg, &cfg.output, &format!("liom_N{n}"))?);
    }
    Ok(paths)
}

/// One XXZ ensemble per (W, Δ, N), in that nesting order.
struct XxzRun {
    disorder: f64,
    delta: f64,
    n: usize,
    result: EnsembleResult,
}

fn xxz_ensembles(cfg: &RunConfig) -> Result<Vec<XxzRun>> {
    let times = time_grid(cfg)?;
    let mut runs = Vec::new();
    for &disorder in &cfg.disorders {
        for &delta in &cfg.deltas {
            for &n in &cfg.n_profiles {
                let obs = vec![Observable::Entropy, Observable::Imbalance, Observable::SuccessProb];
                let result = run_one(cfg, xxz_model(cfg, delta, disorder)?, n, obs, &times)?;
                runs.push(XxzRun { disorder, delta, n, result });
            }
        }
    }
    Ok(runs)
}

fn write_xxz_series(cfg: &RunConfig, runs: &[XxzRun]) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for run in runs {
        let (w, delta, n, r) = (run.disorder, run.delta, run.n, &run.result);
        let cols = [
            column(r, Quantity::EntropyVn, false)?,
            column(r, Quantity::EntropyVn, true)?,
            column(r, Quantity::ImbalanceRaw, false)?,
            column(r, Quantity::ImbalanceNorm, false)?,
            column(r, Quantity::ImbalanceNorm, true)?,
            column(r, Quantity::SuccessProb, false)?,
        ];
        let mut table = Table::new(vec![
            "t",
            "S_vN_mean",
            "S_vN_sem",
            "I_raw_mean",
            "I_norm_mean",
            "I_sem",
            "success_prob_mean",
        ]);
        table.note("series", format!("W={w} delta={delta} N={n}"));
        table.note("I_sem", "standard error of the normalized imbalance");
        annotate(&mut table, r);
        for (k, &t) in r.times.iter().enumerate() {
            let mut row = vec![Cell::Num(t)];
            row.extend(cols.iter().map(|c| Cell::Num(c[k])));
            table.rows.push(row);
        }
        paths.push(table.write(cfg, &cfg.output, &format!("xxz_W{w}_delta{delta}_N{n}"))?);
    }
    Ok(paths)
}

/// Saturation summary of one ensemble over the configured window.
#[derive(Clone, Debug, PartialEq)]
pub struct SaturationRow {
    pub entropy_sat: f64,
    pub imbalance_sat_raw: f64,
    pub imbalance_sat_norm: f64,
    pub t_sat: SaturationTime,
}

pub fn saturation_row(result: &EnsembleResult, window: (f64, f64), epsilon: f64) -> Result<SaturationRow> {
    let series = |q: Quantity| -> Result<TimeSeries> {
        let v = column(result, q, false)?;
        TimeSeries::new(q.name(), result.times.clone(), v.to_vec())
    };
    let s = series(Quantity::EntropyVn)?;
    let entropy_sat = saturation_value(&s, window.0, window.1)?;
    Ok(SaturationRow {
        entropy_sat,
        imbalance_sat_raw: saturation_value(&series(Quantity::ImbalanceRaw)?, window.0, window.1)?,
        imbalance_sat_norm: saturation_value(&series(Quantity::ImbalanceNorm)?, window.0, window.1)?,
        t_sat: saturation_time(&s, entropy_sat, epsilon)?,
    })
}

fn time_cell(t: Option<f64>) -> Cell {
    t.map_or_else(|| Cell::Text("not_saturated".into()), Cell::Num)
}

fn write_xxz_saturation(cfg: &RunConfig, runs: &[XxzRun]) -> Result<PathBuf> {
    let mut table = Table::new(vec![
        "W",
        "delta",
        "N",
        "S_vN_sat",
        "I_sat_raw",
        "I_sat_norm",
        "T_sat_robust",
        "T_sat_first_crossing",
        "n_degenerate",
    ]);
    for run in runs {
        let row = saturation_row(&run.result, cfg.sat_window, cfg.epsilon)?;
        table.rows.push(vec![
            Cell::Num(run.disorder),
            Cell::Num(run.delta),
            Cell::Int(run.n as u64),
            Cell::Num(row.entropy_sat),
            Cell::Num(row.imbalance_sat_raw),
            Cell::Num(row.imbalance_sat_norm),
            time_cell(row.t_sat.robust),
            time_cell(row.t_sat.first_crossing),
            Cell::Int(run.result.metadata.degenerate_realizations as u64),
        ]);
    }
    table.write(cfg, &cfg.output, "xxz_saturation")
}
