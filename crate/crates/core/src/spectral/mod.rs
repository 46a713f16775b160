//! Discrete function spaces on a periodic box.

mod field;
mod grid;
mod littlewood_paley;
mod norms;
mod spacetime;
mod transform;

pub use field::Field;
pub use grid::Grid1D;
pub use littlewood_paley::{
    dyadic_decomposition, dyadic_scales, littlewood_paley, low_pass, low_pass_symbol, LpBlock,
};
pub use norms::{
    h1_distance, h1_norm, lebesgue_norm, sobolev_norm, sobolev_norm_kind, SobolevKind,
};
pub use spacetime::SpacetimeAccumulator;
pub use transform::{inverse_transform, transform, Spectrum};

/// Mass in the outer band `|x| > 0.9 L`, used to flag boxes that are too
/// small for the dynamics.
pub fn boundary_mass(field: &Field) -> f64 {
    let grid = field.grid();
    let edge = 0.9 * grid.half_length();
    grid.integrate(
        field
            .samples()
            .iter()
            .zip(grid.xs())
            .filter(|(_, x)| x.abs() > edge)
            .map(|(z, _)| z.norm_sqr()),
    )
}
