use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform periodic grid on `[-L, L)` with its dual wavenumber lattice.
///
/// Wavenumbers are stored in FFT order: `k_j = (π/L)·j` for
/// `j = 0, 1, …, n/2-1, -n/2, …, -1`. Index `n/2` holds the single
/// Nyquist mode `-n/2`. Cloning is cheap; FFT plans and the lattice are
/// shared behind an `Arc` and are safe for concurrent use.
#[derive(Clone)]
pub struct Grid1D {
    n: usize,
    half_length: f64,
    dx: f64,
    wavenumbers: Arc<[f64]>,
    plans: Arc<Plans>,
}

impl Grid1D {
    pub fn new(n: usize, half_length: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= 16, got {n}"
            )));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half length must be positive and finite, got {half_length}"
            )));
        }
        let dk = PI / half_length;
        let wavenumbers: Arc<[f64]> = (0..n)
            .map(|j| {
                let signed = if j < n / 2 {
                    j as i64
                } else {
                    j as i64 - n as i64
                };
                dk * signed as f64
            })
            .collect();
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        };
        Ok(Self {
            n,
            half_length,
            dx: 2.0 * half_length / n as f64,
            wavenumbers,
            plans: Arc::new(plans),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Lattice spacing `π/L` of the wavenumbers.
    #[inline]
    pub fn dk(&self) -> f64 {
        PI / self.half_length
    }

    /// Largest resolvable wavenumber magnitude, `π n / (2L)`.
    #[inline]
    pub fn k_max(&self) -> f64 {
        self.dk() * (self.n / 2) as f64
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx
    }

    pub fn xs(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.x(j))
    }

    /// Wavenumbers in FFT order.
    #[inline]
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// FFT-order index of the Nyquist mode.
    #[inline]
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Wavenumber used by odd (derivative-type) multipliers: the Nyquist
    /// mode is mapped to zero.
    #[inline]
    pub fn derivative_wavenumber(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            self.wavenumbers[j]
        }
    }

    /// Same `n` and `L`. Grids compare by geometry, not by plan identity.
    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }

    pub(crate) fn fft_forward(&self, buf: &mut [Complex64]) {
        self.plans.forward.process(buf);
    }

    /// Unnormalised inverse FFT.
    pub(crate) fn fft_inverse(&self, buf: &mut [Complex64]) {
        self.plans.inverse.process(buf);
    }

    pub(crate) fn fft_forward_with_scratch(
        &self,
        buf: &mut [Complex64],
        scratch: &mut [Complex64],
    ) {
        self.plans.forward.process_with_scratch(buf, scratch);
    }

    pub(crate) fn fft_inverse_with_scratch(
        &self,
        buf: &mut [Complex64],
        scratch: &mut [Complex64],
    ) {
        self.plans.inverse.process_with_scratch(buf, scratch);
    }

    pub(crate) fn fft_scratch_len(&self) -> usize {
        self.plans
            .forward
            .get_inplace_scratch_len()
            .max(self.plans.inverse.get_inplace_scratch_len())
    }

    /// Applies the Fourier multiplier `symbol(k_j, j)` to `samples`.
    pub fn apply_multiplier<F>(&self, samples: &[Complex64], symbol: F) -> Vec<Complex64>
    where
        F: Fn(usize) -> Complex64,
    {
        let mut buf = samples.to_vec();
        self.apply_multiplier_in_place(&mut buf, symbol);
        buf
    }

    pub fn apply_multiplier_in_place<F>(&self, buf: &mut [Complex64], symbol: F)
    where
        F: Fn(usize) -> Complex64,
    {
        debug_assert_eq!(buf.len(), self.n);
        self.fft_forward(buf);
        let scale = 1.0 / self.n as f64;
        for (j, v) in buf.iter_mut().enumerate() {
            *v *= symbol(j) * scale;
        }
        self.fft_inverse(buf);
    }

    /// Spectral first derivative of periodic samples (Nyquist zeroed).
    pub fn derivative(&self, samples: &[Complex64]) -> Vec<Complex64> {
        self.apply_multiplier(samples, |j| {
            Complex64::new(0.0, self.derivative_wavenumber(j))
        })
    }

    /// Trapezoid (equivalently Riemann) quadrature of periodic samples.
    pub fn integrate<I: IntoIterator<Item = f64>>(&self, values: I) -> f64 {
        values.into_iter().sum::<f64>() * self.dx
    }
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid1D")
            .field("n", &self.n)
            .field("half_length", &self.half_length)
            .field("dx", &self.dx)
            .finish()
    }
}
