//! Time integration: Strang splitting, the initial-value and final-state
//! problems, scattering extraction and checkpoints.

mod checkpoint;
mod config;
mod solve;
mod strang;

pub use checkpoint::{decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint};
pub use config::{BoundaryAction, Scheme, SolverConfig};
pub use solve::{
    extract_scattering_state, integrate, solve_final_state, solve_ivp, solve_ivp_observed,
    CauchyResidual, RunStatus, ScatteringReport, ScatteringStatus, Trajectory,
};
pub use strang::{step_strang, StrangStepper};
