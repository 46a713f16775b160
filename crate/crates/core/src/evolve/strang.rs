use num_complex::Complex64;

use crate::model::Inhomogeneity;
use crate::spectral::{Field, Grid1D};
use crate::{Error, Result};

/// Reusable Strang splitting step
/// `e^{i(dt/2)Δ} ∘ N_dt ∘ e^{i(dt/2)Δ}`, where `N_dt` is the exact flow
/// `u ↦ u·e^{-i a(x)|u|ᵖ dt}` of `i uₜ = a|u|ᵖu`.
pub struct StrangStepper {
    grid: Grid1D,
    a: Vec<f64>,
    p: f64,
    dt: f64,
    half_kinetic: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl StrangStepper {
    pub fn new(a: &Inhomogeneity, p: f64, dt: f64) -> Self {
        let grid = a.grid().clone();
        let scale = 1.0 / grid.n() as f64;
        let half_kinetic = grid
            .wavenumbers()
            .iter()
            .map(|k| Complex64::from_polar(scale, -0.5 * dt * k * k))
            .collect();
        let scratch = vec![Complex64::default(); grid.fft_scratch_len()];
        Self {
            grid,
            a: a.samples().to_vec(),
            p,
            dt,
            half_kinetic,
            scratch,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn half_kinetic(&mut self, buf: &mut [Complex64]) {
        self.grid.fft_forward_with_scratch(buf, &mut self.scratch);
        for (v, m) in buf.iter_mut().zip(&self.half_kinetic) {
            *v *= m;
        }
        self.grid.fft_inverse_with_scratch(buf, &mut self.scratch);
    }

    fn nonlinear(&self, buf: &mut [Complex64]) {
        let (p, dt) = (self.p, self.dt);
        for (z, &a) in buf.iter_mut().zip(&self.a) {
            if a != 0.0 {
                let phase = -a * z.norm().powf(p) * dt;
                *z *= Complex64::from_polar(1.0, phase);
            }
        }
    }

    /// Advances raw samples by one step. Returns `false` if any sample
    /// became non-finite.
    pub fn advance(&mut self, buf: &mut [Complex64]) -> bool {
        debug_assert_eq!(buf.len(), self.grid.n());
        self.half_kinetic(buf);
        self.nonlinear(buf);
        self.half_kinetic(buf);
        buf.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn step(&mut self, u: &mut Field) -> Result<()> {
        if !u.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let t = u.time() + self.dt;
        if !self.advance(u.samples_mut()) {
            return Err(Error::Instability { t });
        }
        u.set_time(t);
        Ok(())
    }
}

/// One Strang step of size `dt` (negative `dt` steps backward).
pub fn step_strang(u: &Field, a: &Inhomogeneity, p: f64, dt: f64) -> Result<Field> {
    let mut stepper = StrangStepper::new(a, p, dt);
    let mut out = u.clone();
    stepper.step(&mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mass;
    use crate::propagator::free_evolve;
    use crate::spectral::lebesgue_norm;

    fn setup() -> (Grid1D, Field, Inhomogeneity) {
        let g = Grid1D::new(256, 20.0).unwrap();
        let u =
            Field::from_fn(&g, |x| Complex64::from_polar((-x * x / 2.0).exp(), 0.5 * x)).unwrap();
        let a = Inhomogeneity::from_fn(&g, |x| (-x * x).exp(), 1e-8).unwrap();
        (g, u, a)
    }

    #[test]
    fn free_step_is_free_evolution() {
        let (g, u, _) = setup();
        let zero = Inhomogeneity::zero(&g);
        let v = step_strang(&u, &zero, 3.0, 0.01).unwrap();
        let w = free_evolve(&u, 0.01);
        for (a, b) in v.samples().iter().zip(w.samples()) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!((v.time() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn single_step_conserves_mass() {
        let (_, u, a) = setup();
        let v = step_strang(&u, &a, 3.0, 0.05).unwrap();
        let (m0, m1) = (mass(&u), mass(&v));
        assert!((m1 - m0).abs() < 1e-14 * m0);
    }

    #[test]
    fn time_reversal() {
        let (_, u, a) = setup();
        let fwd = step_strang(&u, &a, 3.0, 0.01).unwrap();
        let back = step_strang(&fwd, &a, 3.0, -0.01).unwrap();
        let err = lebesgue_norm(&back.sub(&u).unwrap(), 2.0).unwrap();
        assert!(err < 1e-11, "{err}");
    }

    #[test]
    fn grid_mismatch_rejected() {
        let (_, u, _) = setup();
        let other = Grid1D::new(128, 20.0).unwrap();
        let a = Inhomogeneity::zero(&other);
        assert!(matches!(
            step_strang(&u, &a, 3.0, 0.01),
            Err(Error::GridMismatch)
        ));
    }
}
