use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::summary::RunSummary;

/// One aggregated sweep row; failed runs carry the error text.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub amplitude: f64,
    pub x0: f64,
    pub ok: bool,
    pub error: String,
    pub completed: Option<bool>,
    pub t_final: Option<f64>,
    pub mass_drift: Option<f64>,
    pub energy_drift: Option<f64>,
    pub boundary_violation_at: Option<f64>,
    pub scattering: Option<bool>,
    pub last_residual: Option<f64>,
    pub z_plateau: Option<f64>,
    pub free_distance_h1: Option<f64>,
}

fn axis(values: &[f64], base: f64) -> Vec<f64> {
    if values.is_empty() {
        vec![base]
    } else {
        values.to_vec()
    }
}

/// Configurations of the cartesian product, in row order.
pub fn sweep_configs(cfg: &RunConfig) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for &p in &axis(&cfg.sweep.p, cfg.model.p) {
        for &amp in &axis(&cfg.sweep.amplitude, cfg.initial.amplitude) {
            for &x0 in &axis(&cfg.sweep.x0, cfg.initial.center) {
                let mut c = cfg.clone();
                c.model.p = p;
                c.initial.amplitude = amp;
                c.initial.center = x0;
                c.sweep = Default::default();
                out.push(c);
            }
        }
    }
    out
}

fn row(cfg: &RunConfig, result: &Result<RunSummary, CliError>) -> SweepRow {
    let base = SweepRow {
        p: cfg.model.p,
        amplitude: cfg.initial.amplitude,
        x0: cfg.initial.center,
        ok: result.is_ok(),
        error: String::new(),
        completed: None,
        t_final: None,
        mass_drift: None,
        energy_drift: None,
        boundary_violation_at: None,
        scattering: None,
        last_residual: None,
        z_plateau: None,
        free_distance_h1: None,
    };
    match result {
        Err(e) => SweepRow {
            error: e.to_string(),
            ..base
        },
        Ok(s) => SweepRow {
            completed: Some(s.completed),
            t_final: Some(s.t_final),
            mass_drift: Some(s.mass_drift),
            energy_drift: Some(s.energy_drift),
            boundary_violation_at: s.boundary_violation_at,
            scattering: s.scattering.as_ref().map(|x| x.scattered),
            last_residual: s.scattering.as_ref().map(|x| x.last_residual),
            z_plateau: s.morawetz.as_ref().map(|m| m.z_plateau),
            free_distance_h1: Some(s.free_distance_h1),
            ..base
        },
    }
}

/// Runs every row on the current pool and writes `sweep.csv` and
/// `summaries.json` under `dir`. Failed rows are recorded, not fatal.
pub fn run_sweep(cfg: &RunConfig, dir: &Path) -> Result<Vec<SweepRow>, CliError> {
    let configs = sweep_configs(cfg);
    let results: Vec<Result<RunSummary, CliError>> = configs
        .par_iter()
        .map(|c| c.validate().and_then(|_| crate::simulate(c, None)))
        .collect();
    let rows: Vec<SweepRow> = configs
        .iter()
        .zip(&results)
        .map(|(c, r)| row(c, r))
        .collect();
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("sweep.csv"))?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    let summaries: Vec<Option<&RunSummary>> = results.iter().map(|r| r.as_ref().ok()).collect();
    fs::write(
        dir.join("summaries.json"),
        serde_json::to_string_pretty(&summaries)? + "\n",
    )?;
    Ok(rows)
}
