use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Field, Grid1D};
use crate::Result;

/// Unitary samples of the continuous Fourier transform
/// `û(k) = (2π)^{-1/2} ∫ u(x) e^{-ikx} dx` on the wavenumber lattice, FFT order.
///
/// The lattice `L²` norm `(dk Σ|û_j|²)^{1/2}` equals the grid `L²` norm of
/// the originating samples.
#[derive(Clone, Debug)]
pub struct Spectrum {
    grid: Grid1D,
    modes: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: &Grid1D, modes: Vec<Complex64>) -> Result<Self> {
        if modes.len() != grid.n() {
            return Err(crate::Error::LengthMismatch {
                expected: grid.n(),
                actual: modes.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            modes,
        })
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Modes in FFT order; pair with [`Grid1D::wavenumbers`].
    #[inline]
    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.dk() * self.modes.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }
}

// Phase e^{-i k_j x_0} with x_0 = -L reduces to (-1)^j on the lattice.
fn origin_phase(grid: &Grid1D, j: usize) -> f64 {
    let n = grid.n();
    let signed = if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    };
    if signed.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn transform(field: &Field) -> Spectrum {
    let grid = field.grid();
    let mut modes = field.samples().to_vec();
    grid.fft_forward(&mut modes);
    let scale = grid.dx() / (2.0 * PI).sqrt();
    for (j, m) in modes.iter_mut().enumerate() {
        *m *= scale * origin_phase(grid, j);
    }
    Spectrum {
        grid: grid.clone(),
        modes,
    }
}

/// Inverse of [`transform`]; the result carries timestamp 0.
pub fn inverse_transform(spec: &Spectrum) -> Field {
    let grid = spec.grid();
    let mut samples = spec.modes.clone();
    for (j, m) in samples.iter_mut().enumerate() {
        *m *= origin_phase(grid, j);
    }
    grid.fft_inverse(&mut samples);
    let scale = grid.dk() / (2.0 * PI).sqrt();
    for v in samples.iter_mut() {
        *v *= scale;
    }
    Field::from_parts(grid, samples, 0.0)
}
