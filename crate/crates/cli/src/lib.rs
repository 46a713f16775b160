//! Command-line driver: configuration, structured output and sweeps.

pub mod config;
pub mod error;
pub mod summary;
mod sweep;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use inls::diagnostics::{
    compactness_probe_from_records, morawetz_integrals_from_records, DiagnosticsMonitor,
};
use inls::evolve::{extract_scattering_state, solve_final_state, solve_ivp};
use inls::model::{exponents_for, Expr, Inhomogeneity, DEFAULT_TAIL_TOL};
use inls::profiles::{decompose, load_sequence};
use inls::spectral::{h1_distance, Grid1D};
use serde::Serialize;

pub use config::RunConfig;
pub use error::{exit, CliError};
pub use sweep::{run_sweep, SweepRow};

/// Environment variable bounding the worker pool.
pub const THREADS_ENV: &str = "NLS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "inls",
    version,
    about = "Inhomogeneous defocusing NLS solver and diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the exponent tuple for a power p.
    Exponents {
        #[arg(allow_negative_numbers = true)]
        p: f64,
        #[arg(long)]
        json: bool,
    },
    /// Check the admissibility hypotheses for a model.
    Validate {
        config: Option<PathBuf>,
        /// Inhomogeneity expression (overrides the config).
        #[arg(long = "a", allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long, default_value_t = 60.0)]
        half_length: f64,
    },
    /// Solve the initial-value problem and write diagnostics.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the final-state problem for the configured asymptotic state.
    WaveOp {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-analyze a checkpoint directory.
    Morawetz {
        dir: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Extract concentration profiles from a sequence directory.
    Profiles {
        dir: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the cartesian product of the sweep axes.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the JSON schema of the run configuration.
    Schema,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads.or_else(threads_from_env) {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Config(e.to_string()))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn execute(cmd: Command) -> Result<i32, CliError> {
    let threads = match &cmd {
        Command::Sweep { threads, .. } => *threads,
        _ => None,
    };
    let pool = pool(threads)?;
    pool.install(|| match cmd {
        Command::Exponents { p, json } => cmd_exponents(p, json),
        Command::Validate {
            config,
            expr,
            p,
            n,
            half_length,
        } => cmd_validate(config.as_deref(), expr, p, n, half_length),
        Command::Simulate { config, out } => cmd_simulate(&config, out),
        Command::WaveOp { config, out } => cmd_wave_op(&config, out),
        Command::Morawetz { dir, config } => cmd_morawetz(&dir, &config),
        Command::Profiles { dir, config } => cmd_profiles(&dir, config.as_deref()),
        Command::Sweep { config, out, .. } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output.dir.clone());
            run_sweep(&cfg, &dir)?;
            Ok(exit::SUCCESS)
        }
        Command::Schema => {
            print!("{}", config::SCHEMA);
            Ok(exit::SUCCESS)
        }
    })
}

fn round5(v: f64) -> f64 {
    (v * 1e5).round() / 1e5
}

fn fmt5(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{}", round5(v))
    }
}

pub fn cmd_exponents(p: f64, json: bool) -> Result<i32, CliError> {
    let e = exponents_for(p)?;
    if json {
        // Integral values print without a fractional part; infinity is null.
        let num = |v: f64| {
            if v.is_finite() {
                fmt5(v)
            } else {
                "null".into()
            }
        };
        println!(
            r#"{{"r":{},"s":{},"rho":{},"Q":{}}}"#,
            num(e.r),
            num(e.s),
            num(e.rho),
            num(e.q)
        );
    } else {
        println!(
            "r={} s={} rho={} Q={}",
            fmt5(e.r),
            fmt5(e.s),
            fmt5(e.rho),
            fmt5(e.q)
        );
    }
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct ValidationOutput<'a> {
    p: f64,
    admissible: bool,
    failures: Vec<String>,
    report: &'a inls::model::AdmissibilityReport,
}

fn cmd_validate(
    config: Option<&Path>,
    expr: Option<String>,
    p: Option<f64>,
    n: usize,
    half_length: f64,
) -> Result<i32, CliError> {
    let (a, p) = match config {
        Some(path) => {
            let mut cfg = RunConfig::load(path)?;
            if let Some(e) = expr {
                cfg.model.inhomogeneity = Some(e);
                cfg.model.sample_file = None;
            }
            if let Some(p) = p {
                cfg.model.p = p;
            }
            cfg.validate()?;
            let grid = cfg.grid()?;
            (cfg.inhomogeneity(&grid)?, cfg.model.p)
        }
        None => {
            let (Some(e), Some(p)) = (expr, p) else {
                return Err(CliError::Config(
                    "give a config file or both --a and --p".into(),
                ));
            };
            exponents_for(p)?;
            let grid = Grid1D::new(n, half_length)?;
            (
                Inhomogeneity::from_expr(&grid, &e.parse::<Expr>()?, DEFAULT_TAIL_TOL)?,
                p,
            )
        }
    };
    let report = a.report();
    let failures = report.failures(p);
    print_json(&ValidationOutput {
        p,
        admissible: failures.is_empty(),
        failures: failures.clone(),
        report,
    })?;
    if failures.is_empty() {
        Ok(exit::SUCCESS)
    } else {
        Err(CliError::Inadmissible {
            p,
            report: failures.join("\n"),
        })
    }
}

fn cmd_simulate(config: &Path, out: Option<PathBuf>) -> Result<i32, CliError> {
    let cfg = RunConfig::load(config)?;
    let dir = out.unwrap_or_else(|| cfg.output.dir.clone());
    let summary = simulate(&cfg, Some(&dir))?;
    if let Some(w) = &summary.warning {
        eprintln!("warning: {w}");
    }
    print_json(&summary)?;
    Ok(exit::SUCCESS)
}

/// Runs one configured simulation, optionally writing its artifacts.
pub fn simulate(cfg: &RunConfig, out: Option<&Path>) -> Result<summary::RunSummary, CliError> {
    let grid = cfg.grid()?;
    let a = cfg.inhomogeneity(&grid)?;
    let u0 = cfg.initial_field(&grid)?;
    let traj = solve_ivp(&u0, &a, cfg.model.p, &cfg.solver)?;
    let s = summary::summarize(cfg, &u0, &traj)?;
    if let Some(dir) = out {
        summary::write_run(dir, cfg, &traj, &s)?;
    }
    Ok(s)
}

#[derive(Serialize)]
struct WaveOpSummary {
    round_trip_h1: f64,
    run: summary::RunSummary,
}

fn cmd_wave_op(config: &Path, out: Option<PathBuf>) -> Result<i32, CliError> {
    let cfg = RunConfig::load(config)?;
    let grid = cfg.grid()?;
    let a = cfg.inhomogeneity(&grid)?;
    let u_plus = cfg.initial_field(&grid)?;
    let traj = solve_final_state(&u_plus, &a, cfg.model.p, &cfg.solver)?;
    let recovered = extract_scattering_state(&traj, &cfg.solver)?;
    let run = summary::summarize(&cfg, &traj.checkpoints[0], &traj)?;
    let dir = out.unwrap_or_else(|| cfg.output.dir.clone());
    summary::write_run(&dir, &cfg, &traj, &run)?;
    print_json(&WaveOpSummary {
        round_trip_h1: h1_distance(&recovered.u_plus, &u_plus)?,
        run,
    })?;
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct ReanalysisOutput {
    checkpoints: usize,
    t_final: f64,
    morawetz: Option<inls::diagnostics::MorawetzIntegralsReport>,
    compactness: Option<inls::diagnostics::CompactnessReport>,
}

fn cmd_morawetz(dir: &Path, config: &Path) -> Result<i32, CliError> {
    let cfg = RunConfig::load(config)?;
    let seq = load_sequence(dir)?;
    let grid = seq[0].grid().clone();
    let a = cfg.inhomogeneity(&grid)?;
    let mut monitor = DiagnosticsMonitor::new(&a, cfg.model.p)?;
    let records = seq
        .iter()
        .map(|u| monitor.observe(u))
        .collect::<Result<Vec<_>, _>>()?;
    let t_final = records.last().map_or(0.0, |r| r.t);
    for r in &records {
        println!("{}", serde_json::to_string(r)?);
    }
    print_json(&ReanalysisOutput {
        checkpoints: records.len(),
        t_final,
        morawetz: morawetz_integrals_from_records(&records, cfg.diagnostics.t_report.min(t_final))
            .ok(),
        compactness: compactness_probe_from_records(&records, t_final).ok(),
    })?;
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct BubbleOutput {
    scale: f64,
    profile_h1: f64,
    time_shifts: Vec<f64>,
    space_shifts: Vec<f64>,
}

#[derive(Serialize)]
struct ProfilesOutput {
    bubbles: Vec<BubbleOutput>,
    lower_bounds: Vec<inls::profiles::LowerBoundLog>,
    decoupling: inls::profiles::DecouplingReport,
    original_strichartz: Vec<f64>,
    remainder_strichartz: Vec<f64>,
}

fn cmd_profiles(dir: &Path, config: Option<&Path>) -> Result<i32, CliError> {
    let seq = load_sequence(dir)?;
    let grid = seq[0].grid().clone();
    let (profiles, a) = match config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            let mut prof = cfg.profiles.clone();
            prof.extraction.p = cfg.model.p;
            (prof, cfg.inhomogeneity(&grid)?)
        }
        None => (
            config::ProfilesConfig::default(),
            Inhomogeneity::zero(&grid),
        ),
    };
    let rep = decompose(&seq, &profiles.extraction, profiles.max_bubbles, &a)?;
    print_json(&ProfilesOutput {
        bubbles: rep
            .bubbles
            .iter()
            .map(|b| BubbleOutput {
                scale: b.scale,
                profile_h1: inls::spectral::h1_norm(&b.profile),
                time_shifts: b.time_shifts.clone(),
                space_shifts: b.space_shifts.clone(),
            })
            .collect(),
        lower_bounds: rep.lower_bounds,
        decoupling: rep.decoupling,
        original_strichartz: rep.original_strichartz,
        remainder_strichartz: rep.remainder_strichartz,
    })?;
    Ok(exit::SUCCESS)
}
