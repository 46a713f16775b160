use serde::Serialize;

use super::{SolverConfig, StrangStepper};
use crate::diagnostics::{DiagnosticsMonitor, DiagnosticsRecord};
use crate::model::{exponents_for, Inhomogeneity};
use crate::propagator::free_evolve;
use crate::spectral::{boundary_mass, h1_norm, Field};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunStatus {
    /// Reached `t_end` without an early stop.
    pub completed: bool,
    /// First diagnostics time at which the boundary-mass test failed.
    pub boundary_violation_at: Option<f64>,
    pub steps: usize,
    pub t_final: f64,
    /// Max relative mass drift over the diagnostics stream.
    pub mass_drift: f64,
    /// Max relative energy drift over the diagnostics stream.
    pub energy_drift: f64,
}

/// Checkpoints and diagnostics of one run, in increasing time.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub checkpoints: Vec<Field>,
    pub records: Vec<DiagnosticsRecord>,
    pub status: RunStatus,
}

impl Trajectory {
    /// Wraps externally produced checkpoints (no diagnostics).
    pub fn from_checkpoints(checkpoints: Vec<Field>) -> Result<Self> {
        for w in checkpoints.windows(2) {
            if w[1].time() <= w[0].time() {
                return Err(Error::NonMonotoneTime {
                    previous: w[0].time(),
                    next: w[1].time(),
                });
            }
            w[0].ensure_same_grid(&w[1])?;
        }
        if let Some(i) = checkpoints.iter().position(|f| !f.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        let t_final = checkpoints.last().map_or(0.0, Field::time);
        Ok(Self {
            checkpoints,
            records: Vec::new(),
            status: RunStatus {
                completed: true,
                t_final,
                ..RunStatus::default()
            },
        })
    }

    pub fn last(&self) -> &Field {
        self.checkpoints
            .last()
            .expect("trajectory has at least one checkpoint")
    }

    pub fn t_final(&self) -> f64 {
        self.last().time()
    }

    /// Checkpoint whose time is closest to `t`.
    pub fn checkpoint_near(&self, t: f64) -> &Field {
        self.checkpoints
            .iter()
            .min_by(|a, b| (a.time() - t).abs().total_cmp(&(b.time() - t).abs()))
            .expect("trajectory has at least one checkpoint")
    }
}

fn check_preconditions(u0: &Field, a: &Inhomogeneity, p: f64, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    exponents_for(p)?;
    if !u0.grid().same_as(a.grid()) {
        return Err(Error::GridMismatch);
    }
    if !u0.is_finite() || !h1_norm(u0).is_finite() {
        return Err(Error::Domain(
            "initial data must be a finite H1 field".into(),
        ));
    }
    let report = a.report();
    if !cfg.unsafe_physics && !report.admissible_for(p) {
        return Err(Error::Inadmissible {
            p,
            reason: report.failures(p).join("; "),
        });
    }
    Ok(())
}

/// Integrates the initial-value problem from `u0` (at `u0.time()`) to
/// `u0.time() + cfg.t_end`.
pub fn solve_ivp(u0: &Field, a: &Inhomogeneity, p: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    solve_ivp_observed(u0, a, p, cfg, |_| {})
}

/// [`solve_ivp`] that also hands every intermediate state (including the
/// initial one) to `observer`.
pub fn solve_ivp_observed<F>(
    u0: &Field,
    a: &Inhomogeneity,
    p: f64,
    cfg: &SolverConfig,
    mut observer: F,
) -> Result<Trajectory>
where
    F: FnMut(&Field),
{
    check_preconditions(u0, a, p, cfg)?;
    let steps = cfg.steps();
    let t0 = u0.time();
    let mut stepper = StrangStepper::new(a, p, cfg.dt);
    let mut monitor = DiagnosticsMonitor::new(a, p)?;
    let mut u = u0.clone();
    let m0 = crate::model::mass(u0);

    let mut records = vec![monitor.observe(&u)?];
    let mut checkpoints = vec![u.clone()];
    let mut status = RunStatus::default();
    observer(&u);

    let mut completed = true;
    let mut done = 0;
    for i in 1..=steps {
        let t = t0 + i as f64 * cfg.dt;
        if !stepper.advance(u.samples_mut()) {
            return Err(Error::Instability { t });
        }
        u.set_time(t);
        done = i;
        observer(&u);

        let last = i == steps;
        let mut stop = false;
        if i % cfg.diagnostics_every == 0 || last {
            records.push(monitor.observe(&u)?);
            if status.boundary_violation_at.is_none()
                && boundary_mass(&u) > cfg.boundary_mass_tol * m0
            {
                status.boundary_violation_at = Some(t);
                stop = cfg.boundary_action == super::BoundaryAction::Stop;
            }
        }
        if i % cfg.checkpoint_every == 0 || last || stop {
            checkpoints.push(u.clone());
        }
        if stop {
            completed = last;
            break;
        }
    }

    let (m0, e0) = (records[0].mass, records[0].energy);
    let rel = |v: f64, r: f64| {
        if r == 0.0 {
            (v - r).abs()
        } else {
            ((v - r) / r).abs()
        }
    };
    status.mass_drift = records.iter().map(|r| rel(r.mass, m0)).fold(0.0, f64::max);
    status.energy_drift = records
        .iter()
        .map(|r| rel(r.energy, e0))
        .fold(0.0, f64::max);
    status.completed = completed;
    status.steps = done;
    status.t_final = u.time();
    Ok(Trajectory {
        checkpoints,
        records,
        status,
    })
}

/// Plain integration without diagnostics; `dt` may be negative.
pub fn integrate(u: &Field, a: &Inhomogeneity, p: f64, dt: f64, steps: usize) -> Result<Field> {
    let mut stepper = StrangStepper::new(a, p, dt);
    let t0 = u.time();
    let mut out = u.clone();
    for i in 1..=steps {
        if !stepper.advance(out.samples_mut()) {
            return Err(Error::Instability {
                t: t0 + i as f64 * dt,
            });
        }
    }
    out.set_time(t0 + steps as f64 * dt);
    Ok(out)
}

/// Final-state (wave-operator) problem: finds the solution whose forward
/// evolution approaches `e^{itΔ}u_plus`.
///
/// `u(T)` is set to `e^{iTΔ}u_plus` at `T = cfg.t_big` and integrated back
/// to `t = 0`. The forward run to `T + cfg.final_state_tail` is then
/// compared with `u_plus` in `H¹` and `u(T)` corrected until the mismatch
/// drops below `cfg.final_state_tol`. The returned trajectory is the last
/// forward run.
pub fn solve_final_state(
    u_plus: &Field,
    a: &Inhomogeneity,
    p: f64,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    check_preconditions(u_plus, a, p, cfg)?;
    let target = u_plus.clone().with_time(0.0);
    let back_steps = (cfg.t_big / cfg.dt).round() as usize;
    let t_big = back_steps as f64 * cfg.dt;
    let fwd_cfg = SolverConfig {
        t_end: t_big + cfg.final_state_tail,
        ..cfg.clone()
    };
    let mut u_big = free_evolve(&target, t_big);
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.final_state_max_iters {
        let u0 = integrate(&u_big, a, p, -cfg.dt, back_steps)?.with_time(0.0);
        let traj = solve_ivp(&u0, a, p, &fwd_cfg)?;
        let end = traj.last();
        let v = free_evolve(end, -end.time()).with_time(0.0);
        let delta = target.sub(&v)?;
        residual = h1_norm(&delta);
        if residual < cfg.final_state_tol {
            return Ok(traj);
        }
        u_big = u_big.add(&free_evolve(&delta, t_big))?;
    }
    Err(Error::NonConvergence {
        iterations: cfg.final_state_max_iters,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScatteringStatus {
    Scattered,
    NotYetScattered,
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyResidual {
    pub t_from: f64,
    pub t_to: f64,
    pub h1: f64,
}

#[derive(Clone, Debug)]
pub struct ScatteringReport {
    /// `e^{-itΔ}u(t)` at the last checkpoint, timestamp 0.
    pub u_plus: Field,
    pub residuals: Vec<CauchyResidual>,
    pub status: ScatteringStatus,
}

/// Residuals below this fraction of `‖u_plus‖_{H¹}` are roundoff and count
/// as converged.
const RESIDUAL_FLOOR: f64 = 1e-12;

/// Pulls back late checkpoints by the free flow and tests the Cauchy
/// property of `v(t) = e^{-itΔ}u(t)` in `H¹`.
pub fn extract_scattering_state(traj: &Trajectory, cfg: &SolverConfig) -> Result<ScatteringReport> {
    let late: Vec<&Field> = traj
        .checkpoints
        .iter()
        .filter(|f| f.time() >= cfg.t_min - 1e-9)
        .collect();
    if late.len() < 2 {
        return Err(Error::TrajectoryTooShort {
            reached: traj.t_final(),
            required: cfg.t_min,
        });
    }
    let pulled: Vec<Field> = late.iter().map(|u| free_evolve(u, -u.time())).collect();
    let residuals: Vec<CauchyResidual> = late
        .windows(2)
        .zip(pulled.windows(2))
        .map(|(t, v)| CauchyResidual {
            t_from: t[0].time(),
            t_to: t[1].time(),
            h1: h1_norm(&v[1].sub(&v[0]).expect("same grid")),
        })
        .collect();
    let u_plus = pulled.last().expect("nonempty").clone().with_time(0.0);
    let floor = RESIDUAL_FLOOR * h1_norm(&u_plus).max(1.0);
    let k = cfg.scattering_min_decreasing.max(1);
    let status = if residuals.len() >= k && {
        let tail = &residuals[residuals.len() - k..];
        tail.iter().all(|r| r.h1 < cfg.scattering_tol)
            && tail
                .windows(2)
                .all(|w| w[1].h1 < w[0].h1 || w[1].h1 <= floor)
    } {
        ScatteringStatus::Scattered
    } else {
        ScatteringStatus::NotYetScattered
    };
    Ok(ScatteringReport {
        u_plus,
        residuals,
        status,
    })
}
