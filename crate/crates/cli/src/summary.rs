use std::fs;
use std::io::Write;
use std::path::Path;

use inls::diagnostics::{compactness_probe, morawetz_integrals, DiagnosticsRecord};
use inls::evolve::{extract_scattering_state, ScatteringStatus, Trajectory};
use inls::propagator::free_evolve;
use inls::spectral::{h1_distance, h1_norm, Field};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatteringSummary {
    pub scattered: bool,
    pub residuals: usize,
    pub last_residual: f64,
    pub u_plus_h1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorawetzSummary {
    pub t_report: f64,
    pub z_plateau: f64,
    pub potential_plateau: f64,
    pub sup_morawetz: f64,
    pub sup_h1: f64,
    /// `sup|M| / (sup H¹)²`
    pub fitted_constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactnessSummary {
    pub z_at_start: f64,
    pub inf_z: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub p: f64,
    pub n: usize,
    pub half_length: f64,
    pub completed: bool,
    pub steps: usize,
    pub t_final: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub boundary_violation_at: Option<f64>,
    pub warning: Option<String>,
    pub final_record: Option<DiagnosticsRecord>,
    /// `‖u(T) - e^{iTΔ}u(0)‖_{H¹}`
    pub free_distance_h1: f64,
    pub scattering: Option<ScatteringSummary>,
    pub morawetz: Option<MorawetzSummary>,
    pub compactness: Option<CompactnessSummary>,
}

pub fn summarize(cfg: &RunConfig, u0: &Field, traj: &Trajectory) -> Result<RunSummary, CliError> {
    let last = traj.last();
    let free = free_evolve(u0, last.time() - u0.time());
    let status = &traj.status;
    let warning = status.boundary_violation_at.map(|t| {
        format!(
            "boundary mass exceeded {:e} of the total at t = {t}; enlarge the box",
            cfg.solver.boundary_mass_tol
        )
    });
    let scattering = if cfg.diagnostics.scattering {
        extract_scattering_state(traj, &cfg.solver)
            .ok()
            .map(|s| ScatteringSummary {
                scattered: s.status == ScatteringStatus::Scattered,
                residuals: s.residuals.len(),
                last_residual: s.residuals.last().map_or(f64::NAN, |r| r.h1),
                u_plus_h1: h1_norm(&s.u_plus),
            })
    } else {
        None
    };
    let t_final = traj.t_final();
    let morawetz = if cfg.diagnostics.morawetz && t_final >= 1.0 {
        morawetz_integrals(traj, cfg.diagnostics.t_report.min(t_final))
            .ok()
            .map(|m| MorawetzSummary {
                t_report: m.t_report,
                z_plateau: m.z_plateau,
                potential_plateau: m.potential_plateau,
                sup_morawetz: m.sup_morawetz,
                sup_h1: m.sup_h1,
                fitted_constant: m.morawetz_constant,
            })
    } else {
        None
    };
    let compactness = if cfg.diagnostics.compactness {
        compactness_probe(traj, t_final)
            .ok()
            .map(|c| CompactnessSummary {
                z_at_start: c.z_at_start,
                inf_z: c.inf_z,
                ratio: c.ratio,
            })
    } else {
        None
    };
    Ok(RunSummary {
        p: cfg.model.p,
        n: cfg.grid.n,
        half_length: cfg.grid.half_length,
        completed: status.completed,
        steps: status.steps,
        t_final,
        mass_drift: status.mass_drift,
        energy_drift: status.energy_drift,
        boundary_violation_at: status.boundary_violation_at,
        warning,
        final_record: traj.records.last().cloned(),
        free_distance_h1: h1_distance(last, &free)?,
        scattering,
        morawetz,
        compactness,
    })
}

pub fn write_ndjson(path: &Path, records: &[DiagnosticsRecord]) -> Result<(), CliError> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    fs::File::create(path)?.write_all(&out)?;
    Ok(())
}

/// Writes diagnostics, checkpoints (if enabled) and the summary under `dir`.
pub fn write_run(
    dir: &Path,
    cfg: &RunConfig,
    traj: &Trajectory,
    summary: &RunSummary,
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    write_ndjson(&dir.join("diagnostics.ndjson"), &traj.records)?;
    if cfg.output.checkpoints {
        inls::profiles::write_sequence(&dir.join("checkpoints"), &traj.checkpoints)?;
    }
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(summary)? + "\n",
    )?;
    Ok(())
}
