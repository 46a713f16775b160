use super::Field;
use crate::{Error, Result};

/// `‖u‖_{L^r}` by uniform-grid quadrature; `r = ∞` gives `max |u|`.
pub fn lebesgue_norm(field: &Field, r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::Domain(format!(
            "Lebesgue exponent must be >= 1, got {r}"
        )));
    }
    Ok(lebesgue_norm_of(
        field.samples().iter().map(|z| z.norm()),
        field.grid().dx(),
        r,
    ))
}

/// `L^r` norm of raw moduli with cell width `dx`; `r` is assumed valid.
pub(crate) fn lebesgue_norm_of<I: IntoIterator<Item = f64>>(moduli: I, dx: f64, r: f64) -> f64 {
    if r.is_infinite() {
        return moduli.into_iter().fold(0.0, f64::max);
    }
    if r == 2.0 {
        return (dx * moduli.into_iter().map(|m| m * m).sum::<f64>()).sqrt();
    }
    // scale by the max to keep large exponents from overflowing
    let m: Vec<f64> = moduli.into_iter().collect();
    let peak = m.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let sum: f64 = m.iter().map(|v| (v / peak).powf(r)).sum();
    peak * (dx * sum).powf(1.0 / r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SobolevKind {
    /// Multiplier `(1 + k²)^{s/2}`.
    Inhomogeneous,
    /// Multiplier `|k|^s`.
    Homogeneous,
}

/// `‖u‖_{H^s}` with multiplier `(1 + k²)^{s/2}`.
pub fn sobolev_norm(field: &Field, s: f64) -> f64 {
    sobolev_norm_kind(field, s, SobolevKind::Inhomogeneous)
}

pub fn sobolev_norm_kind(field: &Field, s: f64, kind: SobolevKind) -> f64 {
    let grid = field.grid();
    let mut buf = field.samples().to_vec();
    grid.fft_forward(&mut buf);
    let k = grid.wavenumbers();
    let total: f64 = buf
        .iter()
        .zip(k)
        .map(|(z, &kj)| {
            let weight = match kind {
                SobolevKind::Inhomogeneous => (1.0 + kj * kj).powf(s),
                SobolevKind::Homogeneous if kj == 0.0 => 0.0,
                SobolevKind::Homogeneous => kj.abs().powf(2.0 * s),
            };
            weight * z.norm_sqr()
        })
        .sum();
    (total * grid.dx() / grid.n() as f64).sqrt()
}

/// `‖u‖_{H¹}`.
#[inline]
pub fn h1_norm(field: &Field) -> f64 {
    sobolev_norm(field, 1.0)
}

/// `H¹` distance between two fields on the same grid.
pub fn h1_distance(a: &Field, b: &Field) -> Result<f64> {
    Ok(h1_norm(&a.sub(b)?))
}
