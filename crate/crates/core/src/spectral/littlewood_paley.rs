use num_complex::Complex64;

use super::{Field, Grid1D};
use crate::{Error, Result};

/// C∞ step: 0 for `s <= 0`, 1 for `s >= 1`.
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

/// Low-pass symbol of `P_{≤N}`: 1 on `|k| ≤ N`, 0 on `|k| ≥ 2N`, with a
/// cosine profile driven by a C∞ step in between.
pub fn low_pass_symbol(k: f64, cutoff: f64) -> f64 {
    let s = (k.abs() - cutoff) / cutoff;
    if s >= 1.0 {
        return 0.0;
    }
    let c = (0.5 * std::f64::consts::PI * smooth_step(s)).cos();
    c * c
}

fn is_dyadic(n: f64) -> bool {
    n.is_finite() && n > 0.0 && n.log2().fract() == 0.0
}

/// Dyadic scales resolvable on `grid`, ascending. The first scale is at most
/// the lattice spacing and its block is a low-pass `P_{≤N}` that also
/// carries the zero mode; the last covers the Nyquist wavenumber.
pub fn dyadic_scales(grid: &Grid1D) -> Vec<f64> {
    let lo = grid.dk().log2().floor() as i32;
    let hi = grid.k_max().log2().ceil() as i32;
    (lo..=hi).map(|e| 2f64.powi(e)).collect()
}

/// Result of a dyadic projection. `in_band` is false when `N` lies outside
/// the resolvable band, in which case `field` is zero.
#[derive(Clone, Debug)]
pub struct LpBlock {
    pub field: Field,
    pub scale: f64,
    pub in_band: bool,
}

/// `P_{≤N} f`.
pub fn low_pass(field: &Field, cutoff: f64) -> Result<Field> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::Domain(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    let grid = field.grid();
    let k = grid.wavenumbers();
    let samples = grid.apply_multiplier(field.samples(), |j| {
        Complex64::new(low_pass_symbol(k[j], cutoff), 0.0)
    });
    Ok(Field::from_parts(grid, samples, field.time()))
}

/// Annular projection `P_N f = (P_{≤N} - P_{≤N/2}) f` onto `|k| ~ N`.
///
/// The smallest resolvable scale returns `P_{≤N} f` so that the blocks
/// over [`dyadic_scales`] sum to the identity.
pub fn littlewood_paley(field: &Field, scale: f64) -> Result<LpBlock> {
    if !is_dyadic(scale) {
        return Err(Error::Domain(format!(
            "scale must be a power of two, got {scale}"
        )));
    }
    let grid = field.grid();
    let scales = dyadic_scales(grid);
    let (first, last) = (scales[0], scales[scales.len() - 1]);
    if scale < first || scale > last {
        return Ok(LpBlock {
            field: Field::zeros(grid).with_time(field.time()),
            scale,
            in_band: false,
        });
    }
    let k = grid.wavenumbers();
    let lowest = scale == first;
    let samples = grid.apply_multiplier(field.samples(), |j| {
        let hi = low_pass_symbol(k[j], scale);
        let lo = if lowest {
            0.0
        } else {
            low_pass_symbol(k[j], scale / 2.0)
        };
        Complex64::new(hi - lo, 0.0)
    });
    Ok(LpBlock {
        field: Field::from_parts(grid, samples, field.time()),
        scale,
        in_band: true,
    })
}

/// All blocks of `f` over [`dyadic_scales`].
pub fn dyadic_decomposition(field: &Field) -> Vec<LpBlock> {
    dyadic_scales(field.grid())
        .into_iter()
        .map(|n| littlewood_paley(field, n).expect("scales are dyadic"))
        .collect()
}
