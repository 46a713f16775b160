use super::{lebesgue_norm, Field};
use crate::{Error, Result};

/// Running trapezoid approximation of `‖u‖_{L_t^q L_x^r}` over a stream of
/// timestamped fields.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeAccumulator {
    q: f64,
    r: f64,
    integral: f64,
    last: Option<(f64, f64)>,
}

impl SpacetimeAccumulator {
    pub fn new(q: f64, r: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::Domain(format!(
                "time exponent must lie in [1, ∞), got {q}"
            )));
        }
        if r.is_nan() || r < 1.0 {
            return Err(Error::Domain(format!(
                "space exponent must be >= 1, got {r}"
            )));
        }
        Ok(Self {
            q,
            r,
            integral: 0.0,
            last: None,
        })
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.q, self.r)
    }

    pub fn accumulate(&mut self, field: &Field) -> Result<()> {
        let norm = lebesgue_norm(field, self.r)?;
        self.accumulate_norm(field.time(), norm)
    }

    /// Adds a precomputed `‖u(t)‖_{L^r}` sample.
    pub fn accumulate_norm(&mut self, t: f64, spatial_norm: f64) -> Result<()> {
        let g = spatial_norm.powf(self.q);
        if let Some((t_prev, g_prev)) = self.last {
            if t < t_prev {
                return Err(Error::NonMonotoneTime {
                    previous: t_prev,
                    next: t,
                });
            }
            self.integral += 0.5 * (g + g_prev) * (t - t_prev);
        }
        self.last = Some((t, g));
        Ok(())
    }

    /// Current `(∫ ‖u‖_r^q dt)^{1/q}`.
    pub fn value(&self) -> f64 {
        self.integral.powf(1.0 / self.q)
    }

    pub fn finalize(self) -> f64 {
        self.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid1D;

    #[test]
    fn zero_stream() {
        let g = Grid1D::new(16, 1.0).unwrap();
        let mut acc = SpacetimeAccumulator::new(8.0, 4.0).unwrap();
        for i in 0..10 {
            acc.accumulate(&Field::zeros(&g).with_time(i as f64 * 0.1))
                .unwrap();
        }
        assert_eq!(acc.finalize(), 0.0);
    }

    #[test]
    fn constant_stream() {
        let mut acc = SpacetimeAccumulator::new(6.0, 12.0).unwrap();
        for i in 0..=100 {
            acc.accumulate_norm(i as f64 / 100.0, 0.7).unwrap();
        }
        assert!((acc.finalize() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn rejects_time_reversal_and_bad_exponents() {
        let mut acc = SpacetimeAccumulator::new(2.0, 2.0).unwrap();
        acc.accumulate_norm(1.0, 1.0).unwrap();
        assert!(matches!(
            acc.accumulate_norm(0.5, 1.0),
            Err(Error::NonMonotoneTime { .. })
        ));
        assert!(SpacetimeAccumulator::new(f64::INFINITY, 2.0).is_err());
        assert!(SpacetimeAccumulator::new(0.5, 2.0).is_err());
    }
}
