//! Runtime monitors: the Morawetz quantity and its time derivative, the
//! twisted-gradient `Z(t)` norm, weighted spacetime integrals, a
//! compactness probe and Monte-Carlo checks of the nonlinear inequalities.

mod analysis;
mod inequalities;
mod morawetz;
mod record;

pub use analysis::{
    compactness_probe, compactness_probe_from_records, morawetz_integrals,
    morawetz_integrals_from_records, CompactnessReport, MorawetzIntegralsReport, WindowMinimum,
};
pub use inequalities::{
    difference_bound_terms, gradient_difference_terms, inequality_suite, inequality_suite_with_r,
    nonlinear_holder_terms, superposition_gradient_terms, InequalityEntry, InequalitySuiteReport,
};
pub use morawetz::{
    bilaplacian_weight, morawetz_derivative, morawetz_quantity, weighted_potential, z_norm,
    z_norm_galilean, MorawetzBreakdown, MorawetzWeight,
};
pub use record::{DiagnosticsMonitor, DiagnosticsRecord};
