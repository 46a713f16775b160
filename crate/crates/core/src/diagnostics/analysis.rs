use serde::Serialize;

use super::DiagnosticsRecord;
use crate::evolve::Trajectory;
use crate::{Error, Result};

/// Partial weighted integrals and their plateau behaviour.
#[derive(Clone, Debug, Serialize)]
pub struct MorawetzIntegralsReport {
    pub t_report: f64,
    pub times: Vec<f64>,
    pub z_integral: Vec<f64>,
    pub potential_integral: Vec<f64>,
    /// `(I(T) - I(T/2)) / I(T)` for the Z integral (0 when `I(T) = 0`).
    pub z_plateau: f64,
    pub potential_plateau: f64,
    pub sup_morawetz: f64,
    pub sup_h1: f64,
    /// `sup |M| / (sup ‖u‖_{H¹})²`.
    pub morawetz_constant: f64,
}

fn value_near(records: &[(f64, f64)], t: f64) -> f64 {
    records
        .iter()
        .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
        .map_or(0.0, |r| r.1)
}

fn plateau(series: &[(f64, f64)], t: f64) -> f64 {
    let full = value_near(series, t);
    if full == 0.0 {
        return 0.0;
    }
    (full - value_near(series, 0.5 * t)) / full
}

/// Plateau statistics of the weighted integrals on `[1, t_report]`.
pub fn morawetz_integrals(traj: &Trajectory, t_report: f64) -> Result<MorawetzIntegralsReport> {
    morawetz_integrals_from_records(&traj.records, t_report)
}

pub fn morawetz_integrals_from_records(
    records: &[DiagnosticsRecord],
    t_report: f64,
) -> Result<MorawetzIntegralsReport> {
    let reached = records.last().map_or(f64::NEG_INFINITY, |r| r.t);
    if !(t_report >= 1.0) || reached < t_report - 1e-9 {
        return Err(Error::TrajectoryTooShort {
            reached,
            required: t_report,
        });
    }
    let window: Vec<&DiagnosticsRecord> = records
        .iter()
        .filter(|r| r.t >= 1.0 && r.t <= t_report + 1e-9)
        .collect();
    let z: Vec<(f64, f64)> = window
        .iter()
        .filter_map(|r| r.z_int.map(|v| (r.t, v)))
        .collect();
    let pot: Vec<(f64, f64)> = window
        .iter()
        .filter_map(|r| r.pot_int.map(|v| (r.t, v)))
        .collect();
    let sup_morawetz = window
        .iter()
        .filter_map(|r| r.morawetz)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let sup_h1 = window.iter().map(|r| r.h1).fold(0.0f64, f64::max);
    Ok(MorawetzIntegralsReport {
        t_report,
        times: z.iter().map(|p| p.0).collect(),
        z_integral: z.iter().map(|p| p.1).collect(),
        potential_integral: pot.iter().map(|p| p.1).collect(),
        z_plateau: plateau(&z, t_report),
        potential_plateau: plateau(&pot, t_report),
        sup_morawetz,
        sup_h1,
        morawetz_constant: if sup_h1 > 0.0 {
            sup_morawetz / (sup_h1 * sup_h1)
        } else {
            0.0
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowMinimum {
    pub t_start: f64,
    pub t_end: f64,
    pub min_z: f64,
}

/// Lower-bound probe for `Z(t)` over the sampled times `t ≥ 1`.
#[derive(Clone, Debug, Serialize)]
pub struct CompactnessReport {
    pub z_at_start: f64,
    pub t_start: f64,
    pub inf_z: f64,
    pub inf_at: f64,
    /// `inf Z / Z(t_start)`; 0 when `Z(t_start) = 0`.
    pub ratio: f64,
    pub windows: Vec<WindowMinimum>,
    pub interpretation: String,
}

/// Samples of `Z(t)` for `t ≥ 1` restricted to `[1, t_max]`.
pub fn compactness_probe(traj: &Trajectory, t_max: f64) -> Result<CompactnessReport> {
    compactness_probe_from_records(&traj.records, t_max)
}

pub fn compactness_probe_from_records(
    records: &[DiagnosticsRecord],
    t_max: f64,
) -> Result<CompactnessReport> {
    let z: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.t <= t_max + 1e-9)
        .filter_map(|r| r.z.map(|v| (r.t, v)))
        .collect();
    let Some(&(t_start, z_at_start)) = z.first() else {
        return Err(Error::TrajectoryTooShort {
            reached: records.last().map_or(f64::NEG_INFINITY, |r| r.t),
            required: 1.0,
        });
    };
    let (inf_at, inf_z) = z
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let t_end = z.last().expect("nonempty").0;
    let mut windows = Vec::new();
    let mut lo = t_start;
    while lo < t_end {
        let hi = (2.0 * lo).min(t_end);
        let min_z = z
            .iter()
            .filter(|p| p.0 >= lo && p.0 <= hi)
            .map(|p| p.1)
            .fold(f64::INFINITY, f64::min);
        windows.push(WindowMinimum {
            t_start: lo,
            t_end: hi,
            min_z,
        });
        lo = hi;
    }
    let ratio = if z_at_start > 0.0 {
        inf_z / z_at_start
    } else {
        0.0
    };
    let interpretation = if z_at_start == 0.0 {
        "zero solution: Z vanishes identically".to_string()
    } else if ratio <= 0.5 {
        format!(
            "Z decays to {ratio:.3} of its initial value: consistent with a dispersing solution"
        )
    } else {
        format!("Z stays above {ratio:.3} of its initial value: no decay along the sampled times")
    };
    Ok(CompactnessReport {
        z_at_start,
        t_start,
        inf_z,
        inf_at,
        ratio,
        windows,
        interpretation,
    })
}
