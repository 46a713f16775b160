use num_complex::Complex64;

use super::Grid1D;
use crate::{Error, Result};

/// Complex state `u(t, ·)` sampled on a [`Grid1D`].
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid1D,
    samples: Vec<Complex64>,
    t: f64,
}

impl Field {
    /// Checked constructor: length must match the grid and every sample
    /// must be finite.
    pub fn new(grid: &Grid1D, samples: Vec<Complex64>, t: f64) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                actual: samples.len(),
            });
        }
        if let Some(index) = samples
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid: grid.clone(),
            samples,
            t,
        })
    }

    /// Internal constructor for results of operations that preserve finiteness.
    pub(crate) fn from_parts(grid: &Grid1D, samples: Vec<Complex64>, t: f64) -> Self {
        debug_assert_eq!(samples.len(), grid.n());
        Self {
            grid: grid.clone(),
            samples,
            t,
        }
    }

    pub fn zeros(grid: &Grid1D) -> Self {
        Self::from_parts(grid, vec![Complex64::new(0.0, 0.0); grid.n()], 0.0)
    }

    pub fn from_fn<F: FnMut(f64) -> Complex64>(grid: &Grid1D, mut f: F) -> Result<Self> {
        let samples = grid.xs().map(&mut f).collect();
        Self::new(grid, samples, 0.0)
    }

    pub fn from_real_fn<F: FnMut(f64) -> f64>(grid: &Grid1D, mut f: F) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    #[inline]
    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut Vec<Complex64> {
        &mut self.samples
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    pub fn is_finite(&self) -> bool {
        self.samples
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn scale(&self, lambda: Complex64) -> Field {
        let samples = self.samples.iter().map(|z| z * lambda).collect();
        Field::from_parts(&self.grid, samples, self.t)
    }

    /// `self + other`, keeping `self`'s timestamp.
    pub fn add(&self, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Field::from_parts(&self.grid, samples, self.t))
    }

    /// `self - other`, keeping `self`'s timestamp.
    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.ensure_same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Field::from_parts(&self.grid, samples, self.t))
    }

    /// Spectral derivative `∂ₓu`.
    pub fn derivative(&self) -> Field {
        Field::from_parts(&self.grid, self.grid.derivative(&self.samples), self.t)
    }

    /// Circular shift by whole grid cells: `result(x) = self(x - shift·dx)`.
    pub fn roll(&self, shift: isize) -> Field {
        let n = self.grid.n() as isize;
        let s = shift.rem_euclid(n) as usize;
        let mut samples = self.samples.clone();
        samples.rotate_right(s);
        Field::from_parts(&self.grid, samples, self.t)
    }

    /// Translation by an arbitrary distance via the Fourier shift theorem:
    /// `result(x) = self(x - x0)`.
    pub fn translate(&self, x0: f64) -> Field {
        let k = self.grid.wavenumbers();
        let nyq = self.grid.nyquist_index();
        let samples = self.grid.apply_multiplier(&self.samples, |j| {
            if j == nyq {
                // the Nyquist mode cannot be shifted symmetrically; use the real part
                Complex64::new((k[j] * x0).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, -k[j] * x0)
            }
        });
        Field::from_parts(&self.grid, samples, self.t)
    }
}
