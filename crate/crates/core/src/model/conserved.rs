use super::Inhomogeneity;
use crate::spectral::Field;
use crate::{Error, Result};

fn check_grid(u: &Field, a: &Inhomogeneity) -> Result<()> {
    if u.grid().same_as(a.grid()) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Pointwise `a(x) |u|ᵖ u`.
pub fn nonlinearity(u: &Field, a: &Inhomogeneity, p: f64) -> Result<Field> {
    check_grid(u, a)?;
    let samples = u
        .samples()
        .iter()
        .zip(a.samples())
        .map(|(z, &av)| z * (av * z.norm().powf(p)))
        .collect();
    Ok(Field::from_parts(u.grid(), samples, u.time()))
}

/// `M(u) = ∫ |u|² dx`.
pub fn mass(u: &Field) -> f64 {
    u.grid().integrate(u.samples().iter().map(|z| z.norm_sqr()))
}

/// `½ ‖∂ₓu‖²` with the spectral derivative.
pub fn kinetic_energy(u: &Field) -> f64 {
    let du = u.derivative();
    0.5 * u
        .grid()
        .integrate(du.samples().iter().map(|z| z.norm_sqr()))
}

/// `∫ a |u|^{p+2} / (p+2) dx`.
pub fn potential_energy(u: &Field, a: &Inhomogeneity, p: f64) -> Result<f64> {
    check_grid(u, a)?;
    Ok(u.grid().integrate(
        u.samples()
            .iter()
            .zip(a.samples())
            .map(|(z, &av)| av * z.norm().powf(p + 2.0)),
    ) / (p + 2.0))
}

/// `E(u) = ∫ ½|∂ₓu|² + a|u|^{p+2}/(p+2) dx`.
pub fn energy(u: &Field, a: &Inhomogeneity, p: f64) -> Result<f64> {
    Ok(kinetic_energy(u) + potential_energy(u, a, p)?)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::spectral::Grid1D;

    #[test]
    fn zero_field() {
        let g = Grid1D::new(64, 5.0).unwrap();
        let a = Inhomogeneity::constant(&g, 1.0);
        let u = Field::zeros(&g);
        assert_eq!(mass(&u), 0.0);
        assert_eq!(energy(&u, &a, 3.0).unwrap(), 0.0);
        let n = nonlinearity(&u, &a, 3.0).unwrap();
        assert!(n.samples().iter().all(|z| *z == Complex64::default()));
    }

    #[test]
    fn constant_nonlinearity() {
        let g = Grid1D::new(32, 5.0).unwrap();
        let a = Inhomogeneity::constant(&g, 1.0);
        let c = Complex64::new(0.6, -0.3);
        let u = Field::from_fn(&g, |_| c).unwrap();
        let n = nonlinearity(&u, &a, 3.0).unwrap();
        let expected = c * c.norm().powi(3);
        for z in n.samples() {
            assert!((z - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn grid_mismatch() {
        let g1 = Grid1D::new(32, 5.0).unwrap();
        let g2 = Grid1D::new(32, 6.0).unwrap();
        let a = Inhomogeneity::constant(&g2, 1.0);
        assert!(matches!(
            nonlinearity(&Field::zeros(&g1), &a, 3.0),
            Err(Error::GridMismatch)
        ));
        assert!(energy(&Field::zeros(&g1), &a, 3.0).is_err());
    }

    #[test]
    fn free_energy_is_kinetic() {
        let g = Grid1D::new(128, 10.0).unwrap();
        let a = Inhomogeneity::zero(&g);
        let u = Field::from_fn(&g, |x| Complex64::from_polar((-x * x).exp(), 0.7 * x)).unwrap();
        let e = energy(&u, &a, 3.0).unwrap();
        assert!((e - kinetic_energy(&u)).abs() <= 1e-12 * e);
    }
}
