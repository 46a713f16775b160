use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("timestamps must be increasing: {previous} then {next}")]
    NonMonotoneTime { previous: f64, next: f64 },

    #[error("blowup/instability: non-finite state at t = {t}")]
    Instability { t: f64 },

    #[error("inhomogeneity is not admissible for p = {p}: {reason}")]
    Inadmissible { p: f64, reason: String },

    #[error("final-state iteration did not converge after {iterations} iterations (last H1 correction {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("trajectory too short: reaches t = {reached}, need t >= {required}")]
    TrajectoryTooShort { reached: f64, required: f64 },

    #[error("expression parse error at byte {position}: {message}")]
    Expr { position: usize, message: String },

    #[error("malformed checkpoint {path}: {message}")]
    Checkpoint { path: PathBuf, message: String },

    #[error("malformed sample file: {0}")]
    SampleFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
