use num_complex::Complex64;
use serde::Serialize;

use crate::model::Inhomogeneity;
use crate::spectral::Field;
use crate::{japanese, Error, Result};

fn require_late(t: f64) -> Result<()> {
    if t.is_nan() || t < 1.0 {
        return Err(Error::Domain(format!(
            "weighted diagnostics need t >= 1, got {t}"
        )));
    }
    Ok(())
}

/// The weight `b(t, x) = √(t² + x²)` and the partial derivatives used by the
/// Morawetz identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MorawetzWeight {
    pub t: f64,
}

impl MorawetzWeight {
    pub fn new(t: f64) -> Self {
        Self { t }
    }

    pub fn b(&self, x: f64) -> f64 {
        self.t.hypot(x)
    }

    pub fn b_x(&self, x: f64) -> f64 {
        x / self.b(x)
    }

    pub fn b_xx(&self, x: f64) -> f64 {
        self.t * self.t / self.b(x).powi(3)
    }

    pub fn b_t(&self, x: f64) -> f64 {
        self.t / self.b(x)
    }

    pub fn b_tt(&self, x: f64) -> f64 {
        x * x / self.b(x).powi(3)
    }

    pub fn b_tx(&self, x: f64) -> f64 {
        -self.t * x / self.b(x).powi(3)
    }

    /// Fourth spatial derivative (the one-dimensional bilaplacian).
    pub fn b_xxxx(&self, x: f64) -> f64 {
        let t2 = self.t * self.t;
        (-3.0 * t2 * t2 + 12.0 * t2 * x * x) / self.b(x).powi(7)
    }
}

/// Samples of `ΔΔb` on the grid of `field`-compatible geometry.
pub fn bilaplacian_weight(grid: &crate::spectral::Grid1D, t: f64) -> Vec<f64> {
    let w = MorawetzWeight::new(t);
    grid.xs().map(|x| w.b_xxxx(x)).collect()
}

/// `∫ 2 b_x Im(ū u_x) + |u|² b_t dx` at time `t ≥ 1`.
pub fn morawetz_quantity(u: &Field, t: f64) -> Result<f64> {
    require_late(t)?;
    let grid = u.grid();
    let du = grid.derivative(u.samples());
    let w = MorawetzWeight::new(t);
    Ok(grid.integrate(
        u.samples()
            .iter()
            .zip(&du)
            .zip(grid.xs())
            .map(|((v, dv), x)| 2.0 * w.b_x(x) * (v.conj() * dv).im + v.norm_sqr() * w.b_t(x)),
    ))
}

/// Term-by-term time derivative of the Morawetz quantity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MorawetzBreakdown {
    pub t: f64,
    /// `∫ 4 b_xx |u_x|²`
    pub hessian: f64,
    /// `-∫ |u|² ΔΔb`
    pub bilaplacian: f64,
    /// `(2p/(p+2)) ∫ b_xx a |u|^{p+2}`
    pub potential: f64,
    /// `-(4/(p+2)) ∫ b_x a_x |u|^{p+2}`
    pub repulsive: f64,
    /// `4 ∫ b_tx Im(ū u_x)`
    pub mixed: f64,
    /// `∫ |u|² b_tt`
    pub time: f64,
    pub total: f64,
    /// `∫ |(x + 2it∂ₓ)u|² / b³` plus the potential and repulsive terms;
    /// nonnegative for admissible `a`.
    pub coercive: f64,
}

pub fn morawetz_derivative(
    u: &Field,
    t: f64,
    a: &Inhomogeneity,
    p: f64,
) -> Result<MorawetzBreakdown> {
    require_late(t)?;
    if !u.grid().same_as(a.grid()) {
        return Err(Error::GridMismatch);
    }
    let grid = u.grid();
    let du = grid.derivative(u.samples());
    let w = MorawetzWeight::new(t);
    let (mut hessian, mut bilap, mut pot, mut rep, mut mixed, mut time, mut twisted) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (j, x) in grid.xs().enumerate() {
        let v = u.samples()[j];
        let dv = du[j];
        let m2 = v.norm_sqr();
        let high = m2.powf(0.5 * p + 1.0);
        let momentum = (v.conj() * dv).im;
        hessian += 4.0 * w.b_xx(x) * dv.norm_sqr();
        bilap -= m2 * w.b_xxxx(x);
        pot += w.b_xx(x) * a.samples()[j] * high;
        rep += w.b_x(x) * a.derivative_samples()[j] * high;
        mixed += 4.0 * w.b_tx(x) * momentum;
        time += m2 * w.b_tt(x);
        let jv = v * x + Complex64::new(0.0, 2.0 * t) * dv;
        twisted += jv.norm_sqr() / w.b(x).powi(3);
    }
    let dx = grid.dx();
    let potential = 2.0 * p / (p + 2.0) * pot * dx;
    let repulsive = -4.0 / (p + 2.0) * rep * dx;
    let out = MorawetzBreakdown {
        t,
        hessian: hessian * dx,
        bilaplacian: bilap * dx,
        potential,
        repulsive,
        mixed: mixed * dx,
        time: time * dx,
        total: 0.0,
        coercive: twisted * dx + potential + repulsive,
    };
    Ok(MorawetzBreakdown {
        total: out.hessian + out.bilaplacian + out.potential + out.repulsive + out.mixed + out.time,
        ..out
    })
}

/// `c(t, x)² = t / (⟨t⟩³ + |x|³)`.
fn z_weight_sq(t: f64, x: f64) -> f64 {
    t / (japanese(t).powi(3) + x.abs().powi(3))
}

/// `‖c (x + 2it∂ₓ) u‖₂` with `c = √(t / (⟨t⟩³ + |x|³))`, for `t ≥ 1`.
pub fn z_norm(u: &Field, t: f64) -> Result<f64> {
    require_late(t)?;
    let grid = u.grid();
    let du = grid.derivative(u.samples());
    let i2t = Complex64::new(0.0, 2.0 * t);
    let sum = grid.integrate(
        u.samples()
            .iter()
            .zip(&du)
            .zip(grid.xs())
            .map(|((v, dv), x)| z_weight_sq(t, x) * (v * x + i2t * dv).norm_sqr()),
    );
    Ok(sum.sqrt())
}

/// Same quantity through `(x + 2it∂ₓ)u = e^{ix²/4t} 2it ∂ₓ(e^{-ix²/4t} u)`.
pub fn z_norm_galilean(u: &Field, t: f64) -> Result<f64> {
    require_late(t)?;
    let grid = u.grid();
    let twisted: Vec<Complex64> = u
        .samples()
        .iter()
        .zip(grid.xs())
        .map(|(v, x)| v * Complex64::from_polar(1.0, -x * x / (4.0 * t)))
        .collect();
    let d = grid.derivative(&twisted);
    let sum = grid.integrate(
        d.iter()
            .zip(grid.xs())
            .map(|(dv, x)| z_weight_sq(t, x) * 4.0 * t * t * dv.norm_sqr()),
    );
    Ok(sum.sqrt())
}

/// `∫ ⟨t⟩² a |u|^{p+2} / (⟨t⟩³ + |x|³) dx`.
pub fn weighted_potential(u: &Field, t: f64, a: &Inhomogeneity, p: f64) -> Result<f64> {
    if !u.grid().same_as(a.grid()) {
        return Err(Error::GridMismatch);
    }
    let jt = japanese(t);
    let grid = u.grid();
    Ok(grid.integrate(
        u.samples()
            .iter()
            .zip(a.samples())
            .zip(grid.xs())
            .map(|((v, av), x)| {
                jt * jt * av * v.norm_sqr().powf(0.5 * p + 1.0) / (jt.powi(3) + x.abs().powi(3))
            }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid1D;

    fn gaussian(grid: &Grid1D, kappa: f64) -> Field {
        Field::from_fn(grid, |x| {
            Complex64::from_polar((-x * x / 2.0).exp(), kappa * x)
        })
        .unwrap()
    }

    #[test]
    fn weight_derivatives_match_finite_differences() {
        let h = 1e-4;
        for &(t, x) in &[(1.0, 0.3), (2.5, -4.0), (7.0, 11.0)] {
            let w = MorawetzWeight::new(t);
            let bx = (w.b(x + h) - w.b(x - h)) / (2.0 * h);
            let bt =
                (MorawetzWeight::new(t + h).b(x) - MorawetzWeight::new(t - h).b(x)) / (2.0 * h);
            let bxx = (w.b_x(x + h) - w.b_x(x - h)) / (2.0 * h);
            let btt =
                (MorawetzWeight::new(t + h).b_t(x) - MorawetzWeight::new(t - h).b_t(x)) / (2.0 * h);
            let btx = (w.b_t(x + h) - w.b_t(x - h)) / (2.0 * h);
            let b4 = (w.b_xx(x + h) - 2.0 * w.b_xx(x) + w.b_xx(x - h)) / (h * h);
            assert!((bx - w.b_x(x)).abs() < 1e-7);
            assert!((bt - w.b_t(x)).abs() < 1e-7);
            assert!((bxx - w.b_xx(x)).abs() < 1e-7);
            assert!((btt - w.b_tt(x)).abs() < 1e-7);
            assert!((btx - w.b_tx(x)).abs() < 1e-7);
            assert!((b4 - w.b_xxxx(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn early_times_are_rejected() {
        let grid = Grid1D::new(64, 10.0).unwrap();
        let u = gaussian(&grid, 0.0);
        assert!(matches!(morawetz_quantity(&u, 0.5), Err(Error::Domain(_))));
        assert!(z_norm(&u, 0.99).is_err());
        let a = Inhomogeneity::zero(&grid);
        assert!(morawetz_derivative(&u, 0.0, &a, 3.0).is_err());
    }

    #[test]
    fn real_field_has_no_momentum_term() {
        let grid = Grid1D::new(512, 20.0).unwrap();
        let u = gaussian(&grid, 0.0);
        let t = 2.0;
        let expected = grid.integrate(
            u.samples()
                .iter()
                .zip(grid.xs())
                .map(|(v, x)| v.norm_sqr() * t / t.hypot(x)),
        );
        let m = morawetz_quantity(&u, t).unwrap();
        assert!(m > 0.0);
        assert!((m - expected).abs() < 1e-13);
    }

    #[test]
    fn zero_field_gives_zero() {
        let grid = Grid1D::new(64, 10.0).unwrap();
        let u = Field::zeros(&grid);
        let a = Inhomogeneity::constant(&grid, 1.0);
        assert_eq!(morawetz_quantity(&u, 1.0).unwrap(), 0.0);
        assert_eq!(
            morawetz_derivative(&u, 3.0, &a, 3.0).unwrap(),
            MorawetzBreakdown {
                t: 3.0,
                ..Default::default()
            }
        );
        assert_eq!(z_norm(&u, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn coercive_part_collects_twisted_terms() {
        let grid = Grid1D::new(512, 20.0).unwrap();
        let u = gaussian(&grid, 1.3);
        let a = Inhomogeneity::from_fn(&grid, |x| (-x * x).exp(), 1e-8).unwrap();
        let d = morawetz_derivative(&u, 1.5, &a, 3.0).unwrap();
        let sum = d.hessian + d.mixed + d.time + d.potential + d.repulsive;
        assert!((sum - d.coercive).abs() < 1e-12 * sum.abs().max(1.0));
        assert!(d.repulsive >= 0.0 && d.potential >= 0.0);
    }

    #[test]
    fn bilaplacian_bounded_by_inverse_cube() {
        let grid = Grid1D::new(1024, 200.0).unwrap();
        for &t in &[1.0, 3.0, 10.0, 100.0] {
            let m = bilaplacian_weight(&grid, t)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(m * t.powi(3) <= 3.0 + 1e-9);
        }
    }

    #[test]
    fn galilean_form_agrees() {
        let grid = Grid1D::new(2048, 40.0).unwrap();
        let u = gaussian(&grid, 0.7);
        for &t in &[1.0, 2.0, 10.0] {
            let a = z_norm(&u, t).unwrap();
            let b = z_norm_galilean(&u, t).unwrap();
            assert!((a - b).abs() <= 1e-10 * a, "t={t} {a} {b}");
        }
    }
}
