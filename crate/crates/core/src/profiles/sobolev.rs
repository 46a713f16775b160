use serde::Serialize;

use crate::spectral::{dyadic_decomposition, h1_norm, lebesgue_norm, Field};
use crate::{Error, Result};

/// Interpolation exponent used in the refined Sobolev ratio: `(r-2)/r` for
/// `r ≤ 4`, otherwise `(2/3 + 4/(3r)) / 2`.
pub fn refined_sobolev_theta(r: f64) -> f64 {
    if r <= 4.0 {
        (r - 2.0) / r
    } else {
        0.5 * (2.0 / 3.0 + 4.0 / (3.0 * r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RefinedSobolev {
    /// `‖f‖_r / (sup_N ‖P_N f‖_r^θ ‖f‖_{H¹}^{1-θ})`
    pub ratio: f64,
    pub theta: f64,
    pub sup_block: f64,
    pub best_scale: f64,
}

/// Refined Sobolev ratio with the default exponent; `None` for the zero
/// field.
pub fn refined_sobolev_ratio(f: &Field, r: f64) -> Result<Option<RefinedSobolev>> {
    refined_sobolev_ratio_with_theta(f, r, refined_sobolev_theta(r))
}

pub fn refined_sobolev_ratio_with_theta(
    f: &Field,
    r: f64,
    theta: f64,
) -> Result<Option<RefinedSobolev>> {
    if !(r > 2.0) || r.is_infinite() {
        return Err(Error::Domain(format!(
            "refined Sobolev needs 2 < r < inf, got {r}"
        )));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(format!(
            "theta must lie in [0, 1], got {theta}"
        )));
    }
    let h1 = h1_norm(f);
    if h1 == 0.0 {
        return Ok(None);
    }
    let mut sup_block = 0.0;
    let mut best_scale = 0.0;
    for block in dyadic_decomposition(f) {
        let n = lebesgue_norm(&block.field, r)?;
        if n > sup_block {
            sup_block = n;
            best_scale = block.scale;
        }
    }
    let ratio = lebesgue_norm(f, r)? / (sup_block.powf(theta) * h1.powf(1.0 - theta));
    Ok(Some(RefinedSobolev {
        ratio,
        theta,
        sup_block,
        best_scale,
    }))
}
