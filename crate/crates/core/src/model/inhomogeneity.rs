use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::Expr;
use crate::spectral::Grid1D;
use crate::{Error, Result};

/// Default threshold on `∫_{|x|>L/2} |a|` separating the two decay classes.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

const NONNEGATIVE_TOL: f64 = 1e-12;
const REPULSIVE_REL_TOL: f64 = 1e-10;
const GRADIENT_TAIL_TOL: f64 = 1e-6;
const DERIVATIVE_REL_TOL: f64 = 1e-6;
const EDGE_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecayClass {
    /// `a, a' ∈ L^∞` only.
    BoundedOnly,
    /// `a, a' ∈ L¹ ∩ L^∞`.
    IntegrableAndBounded,
}

/// Per-hypothesis admissibility flags for a sampled inhomogeneity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub nonnegative: bool,
    pub repulsive: bool,
    pub gradient_vanishes_at_infinity: bool,
    pub decay_class: DecayClass,
    pub a_minus: f64,
    pub a_plus: f64,
    /// Supplied `a'` agrees with spectral differentiation of `a`.
    pub derivative_consistent: bool,
    pub min_a: f64,
    pub max_x_da: f64,
    pub tail_integral: f64,
    pub edge_gradient: f64,
}

impl AdmissibilityReport {
    /// Nonnegative, repulsive and with vanishing gradient at infinity.
    pub fn admissible(&self) -> bool {
        self.nonnegative && self.repulsive && self.gradient_vanishes_at_infinity
    }

    /// [`admissible`](Self::admissible) plus the decay required by `p`:
    /// `L¹` integrability when `2 < p ≤ 4`.
    pub fn admissible_for(&self, p: f64) -> bool {
        self.admissible() && (p > 4.0 || self.decay_class == DecayClass::IntegrableAndBounded)
    }

    /// Human-readable list of violated hypotheses for power `p`.
    pub fn failures(&self, p: f64) -> Vec<String> {
        let mut out = Vec::new();
        if !self.nonnegative {
            out.push(format!("a is negative somewhere (min {:e})", self.min_a));
        }
        if !self.repulsive {
            out.push(format!("x·a'(x) > 0 somewhere (max {:e})", self.max_x_da));
        }
        if !self.gradient_vanishes_at_infinity {
            out.push(format!(
                "|a'| does not vanish near the box edge ({:e})",
                self.edge_gradient
            ));
        }
        if p <= 4.0 && self.decay_class != DecayClass::IntegrableAndBounded {
            out.push(format!(
                "2 < p <= 4 needs a in L1 (tail integral {:e})",
                self.tail_integral
            ));
        }
        out
    }
}

/// Sampled coefficient `a(x)` with its derivative and admissibility report.
#[derive(Clone, Debug)]
pub struct Inhomogeneity {
    grid: Grid1D,
    a: Vec<f64>,
    da: Vec<f64>,
    report: AdmissibilityReport,
}

impl Inhomogeneity {
    pub fn zero(grid: &Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid1D, value: f64) -> Self {
        let n = grid.n();
        Self::with_derivative(grid, vec![value; n], vec![0.0; n], DEFAULT_TAIL_TOL)
            .expect("constant samples are finite")
    }

    /// Samples a closed-form expression; `a'` comes from exact differentiation.
    pub fn from_expr(grid: &Grid1D, expr: &Expr, tail_tol: f64) -> Result<Self> {
        let (a, da) = grid.xs().map(|x| expr.eval_with_derivative(x)).unzip();
        Self::with_derivative(grid, a, da, tail_tol)
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(grid: &Grid1D, f: F, tail_tol: f64) -> Result<Self> {
        validate(&grid.xs().map(f).collect::<Vec<_>>(), grid, tail_tol)
    }

    /// Samples with a caller-supplied derivative.
    pub fn with_derivative(
        grid: &Grid1D,
        a: Vec<f64>,
        da: Vec<f64>,
        tail_tol: f64,
    ) -> Result<Self> {
        for v in [&a, &da] {
            if v.len() != grid.n() {
                return Err(Error::LengthMismatch {
                    expected: grid.n(),
                    actual: v.len(),
                });
            }
            if let Some(index) = v.iter().position(|s| !s.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        let report = assess(grid, &a, &da, tail_tol);
        Ok(Self {
            grid: grid.clone(),
            a,
            da,
            report,
        })
    }

    /// Reads a two-column `x a(x)` text file on a uniform mesh and resamples
    /// it onto `grid` by trigonometric interpolation.
    pub fn from_sample_file(grid: &Grid1D, path: &Path, tail_tol: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let samples = resample_band_limited(&parse_two_columns(&text)?, grid)?;
        validate(&samples, grid, tail_tol)
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[f64] {
        &self.a
    }

    #[inline]
    pub fn derivative_samples(&self) -> &[f64] {
        &self.da
    }

    #[inline]
    pub fn report(&self) -> &AdmissibilityReport {
        &self.report
    }

    pub fn is_identically_zero(&self) -> bool {
        self.a.iter().all(|&v| v == 0.0)
    }
}

/// Validates sampled `a`, computing `a'` spectrally.
pub fn validate(a: &[f64], grid: &Grid1D, tail_tol: f64) -> Result<Inhomogeneity> {
    if a.len() != grid.n() {
        return Err(Error::LengthMismatch {
            expected: grid.n(),
            actual: a.len(),
        });
    }
    let complex: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let da = grid
        .derivative(&complex)
        .into_iter()
        .map(|z| z.re)
        .collect();
    Inhomogeneity::with_derivative(grid, a.to_vec(), da, tail_tol)
}

fn assess(grid: &Grid1D, a: &[f64], da: &[f64], tail_tol: f64) -> AdmissibilityReport {
    let l = grid.half_length();
    let xs: Vec<f64> = grid.xs().collect();

    let min_a = a.iter().copied().fold(f64::INFINITY, f64::min);
    let max_a = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_da = da.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // x = 0 is excluded: x·a' vanishes there identically
    let max_x_da = xs
        .iter()
        .zip(da)
        .filter(|(x, _)| **x != 0.0)
        .map(|(x, d)| x * d)
        .fold(f64::NEG_INFINITY, f64::max);

    let tail_integral = grid.integrate(
        xs.iter()
            .zip(a)
            .filter(|(x, _)| x.abs() > 0.5 * l)
            .map(|(_, v)| v.abs()),
    );
    let edge = (1.0 - EDGE_FRACTION) * l;
    let mean = |it: Vec<f64>| {
        if it.is_empty() {
            0.0
        } else {
            it.iter().sum::<f64>() / it.len() as f64
        }
    };
    let a_plus = mean(
        xs.iter()
            .zip(a)
            .filter(|(x, _)| **x >= edge)
            .map(|(_, v)| *v)
            .collect(),
    );
    let a_minus = mean(
        xs.iter()
            .zip(a)
            .filter(|(x, _)| **x <= -edge)
            .map(|(_, v)| *v)
            .collect(),
    );
    let edge_gradient = xs
        .iter()
        .zip(da)
        .filter(|(x, _)| x.abs() >= edge)
        .fold(0.0f64, |m, (_, d)| m.max(d.abs()));

    let complex: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let spectral = grid.derivative(&complex);
    let diff: f64 = spectral
        .iter()
        .zip(da)
        .map(|(s, d)| (s.re - d).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = da.iter().map(|d| d * d).sum::<f64>().sqrt();
    let derivative_consistent =
        diff <= DERIVATIVE_REL_TOL * scale.max(f64::MIN_POSITIVE) || diff < 1e-12;

    AdmissibilityReport {
        nonnegative: min_a >= -NONNEGATIVE_TOL,
        repulsive: max_x_da <= REPULSIVE_REL_TOL * max_da,
        gradient_vanishes_at_infinity: edge_gradient <= GRADIENT_TAIL_TOL * max_a.max(1.0),
        decay_class: if tail_integral < tail_tol {
            DecayClass::IntegrableAndBounded
        } else {
            DecayClass::BoundedOnly
        },
        a_minus,
        a_plus,
        derivative_consistent,
        min_a,
        max_x_da: if max_x_da.is_finite() { max_x_da } else { 0.0 },
        tail_integral,
        edge_gradient,
    }
}

fn parse_two_columns(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(Error::SampleFile(format!(
                "line {}: expected two columns",
                lineno + 1
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::SampleFile(format!("line {}: bad number '{s}'", lineno + 1)))
        };
        rows.push((parse(cols[0])?, parse(cols[1])?));
    }
    if rows.len() < 4 {
        return Err(Error::SampleFile("need at least four samples".into()));
    }
    Ok(rows)
}

/// Trigonometric interpolation of uniformly spaced samples onto the grid.
/// The samples' span must cover the grid.
fn resample_band_limited(rows: &[(f64, f64)], grid: &Grid1D) -> Result<Vec<f64>> {
    let m = rows.len();
    let x0 = rows[0].0;
    let h = (rows[m - 1].0 - x0) / (m - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::SampleFile("abscissae must be increasing".into()));
    }
    for (i, (x, _)) in rows.iter().enumerate() {
        if (x - (x0 + i as f64 * h)).abs() > 1e-6 * h {
            return Err(Error::SampleFile(format!(
                "abscissae must be uniform (row {})",
                i + 1
            )));
        }
    }
    let x_last = rows[m - 1].0;
    let lo = grid.x(0);
    let hi = grid.x(grid.n() - 1);
    if lo < x0 - 1e-9 * h.max(1.0) || hi > x_last + 1e-9 * h.max(1.0) {
        return Err(Error::SampleFile(format!(
            "samples cover [{x0}, {x_last}] but the grid spans [{lo}, {hi}]"
        )));
    }
    let mut coeffs: Vec<Complex64> = rows.iter().map(|&(_, v)| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut coeffs);
    let period = m as f64 * h;
    let out = grid
        .xs()
        .map(|x| {
            let xi = x - x0;
            let mut acc = 0.0;
            for (j, c) in coeffs.iter().enumerate() {
                let signed = if j <= m / 2 {
                    j as f64
                } else {
                    j as f64 - m as f64
                };
                let k = 2.0 * std::f64::consts::PI * signed / period;
                if m.is_multiple_of(2) && j == m / 2 {
                    acc += c.re * (k * xi).cos();
                } else {
                    acc += (c * Complex64::from_polar(1.0, k * xi)).re;
                }
            }
            acc / m as f64
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::new(512, 20.0).unwrap()
    }

    #[test]
    fn gaussian_is_admissible_and_integrable() {
        let g = grid();
        let a = Inhomogeneity::from_expr(&g, &Expr::parse("exp(-x^2)").unwrap(), DEFAULT_TAIL_TOL)
            .unwrap();
        let r = a.report();
        assert!(r.admissible() && r.admissible_for(3.0));
        assert_eq!(r.decay_class, DecayClass::IntegrableAndBounded);
        assert!(r.a_minus.abs() < 1e-12 && r.a_plus.abs() < 1e-12);
        assert!(r.derivative_consistent);
        // spectral route agrees
        let b = Inhomogeneity::from_fn(&g, |x| (-x * x).exp(), DEFAULT_TAIL_TOL).unwrap();
        assert!(b.report().admissible_for(3.0));
    }

    #[test]
    fn constant_is_bounded_only() {
        let g = grid();
        let a = Inhomogeneity::constant(&g, 1.0);
        let r = a.report();
        assert!(r.admissible());
        assert_eq!(r.decay_class, DecayClass::BoundedOnly);
        assert!(!r.admissible_for(3.0));
        assert!(r.admissible_for(5.0));
        assert_eq!((r.a_minus, r.a_plus), (1.0, 1.0));
        assert_eq!(r.failures(3.0).len(), 1);
    }

    #[test]
    fn growing_coefficient_is_not_repulsive() {
        let g = grid();
        let a = Inhomogeneity::from_expr(&g, &Expr::parse("1 + x^2").unwrap(), DEFAULT_TAIL_TOL)
            .unwrap();
        assert!(!a.report().repulsive);
        assert!(!a.report().admissible());
    }

    #[test]
    fn negative_coefficient_flagged() {
        let a = Inhomogeneity::constant(&grid(), -1.0);
        assert!(!a.report().nonnegative);
    }

    #[test]
    fn repulsivity_holds_pointwise_when_flagged() {
        let g = grid();
        let a = Inhomogeneity::from_expr(&g, &Expr::parse("sech(x)^2").unwrap(), DEFAULT_TAIL_TOL)
            .unwrap();
        assert!(a.report().repulsive);
        let bound = 1e-10
            * a.derivative_samples()
                .iter()
                .fold(0.0f64, |m, d| m.max(d.abs()));
        for (x, d) in g.xs().zip(a.derivative_samples()) {
            assert!(x * d <= bound);
        }
    }

    #[test]
    fn sample_file_resampling() {
        let g = Grid1D::new(128, 10.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        let mut text = String::from("# x a\n");
        for i in 0..=400 {
            let x = -10.0 + i as f64 * 0.05;
            text.push_str(&format!("{x} {}\n", (-x * x).exp()));
        }
        std::fs::write(&path, text).unwrap();
        let a = Inhomogeneity::from_sample_file(&g, &path, DEFAULT_TAIL_TOL).unwrap();
        for (x, v) in g.xs().zip(a.samples()) {
            assert!((v - (-x * x).exp()).abs() < 1e-8, "x = {x}");
        }
        assert!(a.report().admissible_for(3.0));

        let short = dir.path().join("short.txt");
        std::fs::write(&short, "0 1\n1 1\n2 1\n3 1\n").unwrap();
        assert!(Inhomogeneity::from_sample_file(&g, &short, DEFAULT_TAIL_TOL).is_err());
    }
}
