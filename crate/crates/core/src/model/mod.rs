//! Physical model: the inhomogeneity, exponents, nonlinearity and
//! conserved quantities.

mod conserved;
mod exponents;
mod expr;
mod inhomogeneity;

pub use conserved::{energy, kinetic_energy, mass, nonlinearity, potential_energy};
pub use exponents::{exponents_for, is_admissible_pair, Exponents};
pub use expr::Expr;
pub use inhomogeneity::{
    validate, AdmissibilityReport, DecayClass, Inhomogeneity, DEFAULT_TAIL_TOL,
};
