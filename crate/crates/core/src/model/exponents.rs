use serde::Serialize;

use crate::{Error, Result};

/// Exponents governing the norms used for a given nonlinearity power `p`.
///
/// `rho` is `+∞` for `p > 4`. The interpolation window `(theta, q_window,
/// r_window)` is the pair used by the modified Hölder estimate for
/// products with `p - 1` copies of the solution; it satisfies
/// `q < q_window < 2p` and `2/q_window + 1/r_window = 1/2 - s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Exponents {
    pub p: f64,
    pub r: f64,
    pub s: f64,
    pub rho: f64,
    pub q: f64,
    pub theta: f64,
    pub q_window: f64,
    pub r_window: f64,
}

/// Strict lower bound on the interpolation parameter `θ`.
fn theta_floor(p: f64) -> f64 {
    if p > 4.0 {
        2.0 / p - 1.0
    } else {
        (5.0 * p - 2.0 - p * p) / (2.0 * p)
    }
}

pub fn exponents_for(p: f64) -> Result<Exponents> {
    if !(p.is_finite() && p > 2.0) {
        return Err(Error::Domain(format!(
            "p must exceed 2 (mass-critical-like regime out of scope), got {p}"
        )));
    }
    let (r, s, q) = if p > 4.0 {
        (p, 0.5 - 2.0 / p, p)
    } else {
        (
            4.0 * p / (p - 2.0),
            0.25 - 1.0 / (2.0 * p),
            8.0 * p / (p + 2.0),
        )
    };
    // ρ(4) is not assigned by the case split; the lower branch is extended to p = 4.
    let rho = if p > 4.0 {
        f64::INFINITY
    } else {
        4.0 / (6.0 - p)
    };
    let theta = 0.5 * (theta_floor(p).max(0.0) + 1.0);
    let q_window = 4.0 * p * (p - 1.0) / ((3.0 - theta) * p - 2.0);
    let r_window = 2.0 * r * (p - 1.0) / (2.0 * (p - 1.0) - r * (1.0 - theta));
    Ok(Exponents {
        p,
        r,
        s,
        rho,
        q,
        theta,
        q_window,
        r_window,
    })
}

/// Strichartz admissibility in one dimension: `2 ≤ α, β ≤ ∞` and
/// `2/α + 1/β = 1/2`.
pub fn is_admissible_pair(alpha: f64, beta: f64) -> bool {
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
    alpha >= 2.0 && beta >= 2.0 && (2.0 * inv(alpha) + inv(beta) - 0.5).abs() < 1e-12
}
