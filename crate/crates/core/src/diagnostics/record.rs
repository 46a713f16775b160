use serde::{Deserialize, Serialize};

use super::morawetz::{morawetz_quantity, weighted_potential, z_norm};
use crate::model::{energy, exponents_for, mass, Inhomogeneity};
use crate::spectral::{h1_norm, lebesgue_norm, Field, SpacetimeAccumulator};
use crate::{Error, Result};

/// One diagnostics sample. Weighted quantities are only defined for
/// `t ≥ 1` and are `None` (JSON `null`) before that.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub h1: f64,
    pub morawetz: Option<f64>,
    pub z: Option<f64>,
    /// `∫₁ᵗ Z(s)² ds/s` so far.
    pub z_int: Option<f64>,
    /// `∫₁ᵗ ∫ ⟨s⟩² a|u|^{p+2} / (⟨s⟩³ + |x|³) dx ds` so far.
    pub pot_int: Option<f64>,
    /// Running `L_t^{2p} L_x^r` norm.
    pub scat_norm: f64,
}

#[derive(Clone, Debug, Default)]
struct Trapezoid {
    last: Option<(f64, f64)>,
    value: f64,
}

impl Trapezoid {
    fn push(&mut self, t: f64, y: f64) -> f64 {
        if let Some((t0, y0)) = self.last {
            self.value += 0.5 * (t - t0) * (y + y0);
        }
        self.last = Some((t, y));
        self.value
    }
}

/// Produces [`DiagnosticsRecord`]s from a time-ordered stream of fields.
#[derive(Clone, Debug)]
pub struct DiagnosticsMonitor {
    a: Inhomogeneity,
    p: f64,
    r: f64,
    z_int: Trapezoid,
    pot_int: Trapezoid,
    scattering: SpacetimeAccumulator,
    last_t: Option<f64>,
}

impl DiagnosticsMonitor {
    pub fn new(a: &Inhomogeneity, p: f64) -> Result<Self> {
        let exps = exponents_for(p)?;
        Ok(Self {
            a: a.clone(),
            p,
            r: exps.r,
            z_int: Trapezoid::default(),
            pot_int: Trapezoid::default(),
            scattering: SpacetimeAccumulator::new(2.0 * p, exps.r)?,
            last_t: None,
        })
    }

    pub fn observe(&mut self, u: &Field) -> Result<DiagnosticsRecord> {
        let t = u.time();
        if let Some(prev) = self.last_t {
            if t <= prev {
                return Err(Error::NonMonotoneTime {
                    previous: prev,
                    next: t,
                });
            }
        }
        if !u.grid().same_as(self.a.grid()) {
            return Err(Error::GridMismatch);
        }
        self.last_t = Some(t);
        self.scattering
            .accumulate_norm(t, lebesgue_norm(u, self.r)?)?;
        let (morawetz, z, z_int, pot_int) = if t >= 1.0 {
            let z = z_norm(u, t)?;
            let pot = weighted_potential(u, t, &self.a, self.p)?;
            (
                Some(morawetz_quantity(u, t)?),
                Some(z),
                Some(self.z_int.push(t, z * z / t)),
                Some(self.pot_int.push(t, pot)),
            )
        } else {
            (None, None, None, None)
        };
        Ok(DiagnosticsRecord {
            t,
            mass: mass(u),
            energy: energy(u, &self.a, self.p)?,
            h1: h1_norm(u),
            morawetz,
            z,
            z_int,
            pot_int,
            scat_norm: self.scattering.value(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid1D;

    #[test]
    fn ndjson_keys_and_nulls() {
        let grid = Grid1D::new(64, 10.0).unwrap();
        let a = Inhomogeneity::zero(&grid);
        let mut mon = DiagnosticsMonitor::new(&a, 3.0).unwrap();
        let rec = mon.observe(&Field::zeros(&grid)).unwrap();
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"t":0.0,"mass":0.0,"energy":0.0,"h1":0.0,"morawetz":null,"z":null,"z_int":null,"pot_int":null,"scat_norm":0.0}"#
        );
        let back: DiagnosticsRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn integrals_start_at_one_and_grow() {
        let grid = Grid1D::new(128, 15.0).unwrap();
        let a = Inhomogeneity::from_fn(&grid, |x| (-x * x).exp(), 1e-8).unwrap();
        let mut mon = DiagnosticsMonitor::new(&a, 3.0).unwrap();
        let u = Field::from_real_fn(&grid, |x| (-x * x / 2.0).exp()).unwrap();
        let mut prev = 0.0;
        for (i, t) in [0.5, 1.0, 1.5, 2.0, 3.0].into_iter().enumerate() {
            let rec = mon.observe(&u.clone().with_time(t)).unwrap();
            if t < 1.0 {
                assert!(rec.z_int.is_none());
            } else {
                let z = rec.z_int.unwrap();
                if i == 1 {
                    assert_eq!(z, 0.0);
                }
                assert!(z >= prev);
                prev = z;
            }
        }
        assert!(mon.observe(&u.clone().with_time(2.0)).is_err());
    }
}
