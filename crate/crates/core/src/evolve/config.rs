use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Strang,
}

/// What to do when mass reaches the outer band of the box.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryAction {
    /// Record the violation and stop integrating.
    #[default]
    Stop,
    /// Record the violation and keep going.
    Warn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Steps between stored checkpoints.
    pub checkpoint_every: usize,
    /// Steps between diagnostics records.
    pub diagnostics_every: usize,
    /// Allowed boundary mass relative to the initial mass.
    pub boundary_mass_tol: f64,
    pub boundary_action: BoundaryAction,
    /// Permit inadmissible (e.g. focusing) coefficients.
    pub unsafe_physics: bool,
    /// Final-state problem: time at which the asymptotic state is imposed.
    pub t_big: f64,
    /// Final-state problem: forward verification runs to `t_big + tail`.
    pub final_state_tail: f64,
    pub final_state_max_iters: usize,
    pub final_state_tol: f64,
    /// Scattering detection only looks at checkpoints with `t >= t_min`.
    pub t_min: f64,
    pub scattering_tol: f64,
    pub scattering_min_decreasing: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 10.0,
            scheme: Scheme::Strang,
            checkpoint_every: 1000,
            diagnostics_every: 50,
            boundary_mass_tol: 1e-8,
            boundary_action: BoundaryAction::Stop,
            unsafe_physics: false,
            t_big: 40.0,
            final_state_tail: 10.0,
            final_state_max_iters: 8,
            final_state_tol: 1e-6,
            t_min: 20.0,
            scattering_tol: 1e-3,
            scattering_min_decreasing: 3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("dt", self.dt)?;
        positive("t_end", self.t_end)?;
        positive("boundary_mass_tol", self.boundary_mass_tol)?;
        positive("t_big", self.t_big)?;
        positive("final_state_tol", self.final_state_tol)?;
        positive("scattering_tol", self.scattering_tol)?;
        if !(self.final_state_tail.is_finite() && self.final_state_tail >= 0.0) {
            return Err(Error::Domain("final_state_tail must be >= 0".into()));
        }
        if self.checkpoint_every == 0 || self.diagnostics_every == 0 {
            return Err(Error::Domain(
                "checkpoint and diagnostics intervals must be >= 1 step".into(),
            ));
        }
        Ok(())
    }

    /// Number of steps that lands on `t_end` (rounded).
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}
