//! Pseudospectral simulation and diagnostics for the one-dimensional
//! inhomogeneous defocusing nonlinear Schrödinger equation
//!
//! ```text
//! i ∂ₜu + ∂ₓₓu = a(x) |u|ᵖ u
//! ```
//!
//! on a periodic box `[-L, L)`. The crate is organised bottom-up:
//!
//! * [`spectral`]: grids, Fourier transforms, Lebesgue/Sobolev/spacetime
//!   norms and Littlewood–Paley projections.
//! * [`model`]: the inhomogeneity `a(x)` and its admissibility report, the
//!   exponent tuple, the nonlinearity and the conserved quantities.
//! * [`propagator`]: the free Schrödinger group and its quantitative checks.
//! * [`evolve`]: Strang splitting, initial-value and final-state solvers,
//!   scattering-state extraction and the checkpoint file format.
//! * [`diagnostics`]: Morawetz quantity and identity, the `Z(t)` norm,
//!   weighted spacetime integrals and inequality suites.
//! * [`profiles`]: refined Sobolev ratios, bubble extraction and decoupling.

pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod model;
pub mod profiles;
pub mod propagator;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Japanese bracket `⟨t⟩ = √(1 + t²)`.
#[inline]
pub fn japanese(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}
