use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::model::exponents_for;
use crate::profiles::refined_sobolev_ratio;
use crate::spectral::{Field, Grid1D};
use crate::Result;

const CHUNK: usize = 1000;

/// `|z|^p z`
fn power(z: Complex64, p: f64) -> Complex64 {
    z * z.norm().powf(p)
}

/// Chain rule for `∂ f(v)` with `f(z) = |z|^p z`.
fn power_derivative(v: Complex64, dv: Complex64, p: f64) -> Complex64 {
    let m = v.norm();
    let fz = (0.5 * p + 1.0) * m.powf(p);
    let fzbar = if m == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        0.5 * p * m.powf(p - 2.0) * v * v
    };
    fz * dv + fzbar * dv.conj()
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// `|f(u+w) - f(u)|` against `|w|^{p+1} + |w||u|^p`.
pub fn difference_bound_terms(u: Complex64, w: Complex64, p: f64) -> (f64, f64) {
    let lhs = (power(u + w, p) - power(u, p)).norm();
    let (mu, mw) = (u.norm(), w.norm());
    (lhs, mw.powf(p + 1.0) + mw * mu.powf(p))
}

/// `|∂[f(u+w) - f(u)]|` against
/// `|w'||w|^p + |w'||u|^p + |u'||w|^p + |u'||w||u|^{p-1}`.
pub fn gradient_difference_terms(
    u: Complex64,
    du: Complex64,
    w: Complex64,
    dw: Complex64,
    p: f64,
) -> (f64, f64) {
    let lhs = (power_derivative(u + w, du + dw, p) - power_derivative(u, du, p)).norm();
    let (mu, mw, mdu, mdw) = (u.norm(), w.norm(), du.norm(), dw.norm());
    let rhs = mdw * mw.powf(p) + mdw * mu.powf(p) + mdu * mw.powf(p) + mdu * mw * mu.powf(p - 1.0);
    (lhs, rhs)
}

/// For real `v_j`: `|Σ ∂f(v_j) - ∂f(Σ v_j)|` against
/// `Σ_{j≠k} |v_j'||v_k|^p + Σ_{j≠k} |v_j'||v_j|^{p-1}|v_k|`.
pub fn superposition_gradient_terms(v: &[f64], dv: &[f64], p: f64) -> (f64, f64) {
    let df = |x: f64, dx: f64| (p + 1.0) * x.abs().powf(p) * dx;
    let s: f64 = v.iter().sum();
    let ds: f64 = dv.iter().sum();
    let lhs = (v.iter().zip(dv).map(|(&x, &d)| df(x, d)).sum::<f64>() - df(s, ds)).abs();
    let mut rhs = 0.0;
    for j in 0..v.len() {
        for k in 0..v.len() {
            if j != k {
                rhs += dv[j].abs() * v[k].abs().powf(p)
                    + dv[j].abs() * v[j].abs().powf(p - 1.0) * v[k].abs();
            }
        }
    }
    (lhs, rhs)
}

fn lebesgue(values: impl Iterator<Item = f64>, weight: f64, r: f64) -> f64 {
    if r.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (values.map(|v| v.powf(r)).sum::<f64>() * weight).powf(1.0 / r)
    }
}

/// Space-time Hölder estimate on a uniform `nt × nx` lattice:
/// `‖a f |g|^p‖_{L_t^{4/3} L_x^1}` against
/// `‖a‖_{L^ρ} ‖f‖_{L_t^4 L_x^∞} ‖g‖^p_{L_t^{2p} L_x^r}`.
pub fn nonlinear_holder_terms(
    a: &[f64],
    f: &[Vec<Complex64>],
    g: &[Vec<Complex64>],
    dt: f64,
    dx: f64,
    p: f64,
) -> Result<(f64, f64)> {
    let exps = exponents_for(p)?;
    let inner: Vec<f64> = f
        .iter()
        .zip(g)
        .map(|(fr, gr)| {
            fr.iter()
                .zip(gr)
                .zip(a)
                .map(|((fv, gv), av)| av.abs() * fv.norm() * gv.norm().powf(p))
                .sum::<f64>()
                * dx
        })
        .collect();
    let lhs = lebesgue(inner.into_iter(), dt, 4.0 / 3.0);
    let a_norm = lebesgue(a.iter().map(|v| v.abs()), dx, exps.rho);
    let f_norm = lebesgue(
        f.iter()
            .map(|row| row.iter().map(|v| v.norm()).fold(0.0, f64::max)),
        dt,
        4.0,
    );
    let g_rows = g
        .iter()
        .map(|row| lebesgue(row.iter().map(|v| v.norm()), dx, exps.r));
    let g_norm = lebesgue(g_rows, dt, 2.0 * p);
    Ok((lhs, a_norm * f_norm * g_norm.powf(p)))
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    if rng.gen_bool(0.05) {
        return Complex64::new(0.0, 0.0);
    }
    let m = 10f64.powf(rng.gen_range(-2.0..2.0));
    Complex64::from_polar(m, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_real<R: Rng>(rng: &mut R) -> f64 {
    let m = 10f64.powf(rng.gen_range(-2.0..2.0));
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityEntry {
    pub name: String,
    pub trials: usize,
    /// Largest observed `LHS / RHS` (the fitted constant).
    pub max_ratio: f64,
    pub all_finite: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalitySuiteReport {
    pub seed: u64,
    pub p: f64,
    pub entries: Vec<InequalityEntry>,
}

impl InequalitySuiteReport {
    pub fn all_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.all_finite && e.max_ratio.is_finite())
    }

    pub fn entry(&self, name: &str) -> Option<&InequalityEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn run<F>(name: &str, id: u64, seed: u64, trials: usize, sample: F) -> InequalityEntry
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let (max, finite) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((id << 32) | c as u64);
            let count = CHUNK.min(trials - c * CHUNK);
            (0..count).fold((0.0f64, true), |(m, ok), _| {
                let r = sample(&mut rng);
                (
                    if r.is_finite() { m.max(r) } else { m },
                    ok && r.is_finite(),
                )
            })
        })
        .reduce(|| (0.0, true), |a, b| (a.0.max(b.0), a.1 && b.1));
    InequalityEntry {
        name: name.to_string(),
        trials,
        max_ratio: max,
        all_finite: finite,
    }
}

const RSE_GRID_N: usize = 128;
const RSE_HALF_LENGTH: f64 = 16.0;

fn random_multiband(grid: &Grid1D, rng: &mut ChaCha8Rng) -> Field {
    let k_top = 0.5 * grid.k_max();
    let packets: Vec<(f64, f64, f64, f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            (
                10f64.powf(rng.gen_range(-1.0..1.0)),
                rng.gen_range(-8.0..8.0),
                rng.gen_range(0.5..3.0),
                2f64.powf(rng.gen_range(-2.0..k_top.log2())),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    Field::from_fn(grid, |x| {
        packets
            .iter()
            .map(|&(amp, x0, sigma, kappa, phase)| {
                Complex64::from_polar(
                    amp * (-(x - x0).powi(2) / (2.0 * sigma * sigma)).exp(),
                    kappa * x + phase,
                )
            })
            .sum()
    })
    .expect("finite samples")
}

/// Monte-Carlo estimates of the constants in the pointwise nonlinear
/// bounds, the Hölder nonlinear estimate and the refined Sobolev
/// embedding at `r = r(p)`.
pub fn inequality_suite(seed: u64, trials: usize, p: f64) -> Result<InequalitySuiteReport> {
    inequality_suite_with_r(seed, trials, p, exponents_for(p)?.r)
}

/// [`inequality_suite`] with an explicit refined-Sobolev exponent.
pub fn inequality_suite_with_r(
    seed: u64,
    trials: usize,
    p: f64,
    rse_r: f64,
) -> Result<InequalitySuiteReport> {
    exponents_for(p)?;
    let trials = trials.max(1);
    let mut entries = vec![
        run("difference_bound", 1, seed, trials, |rng| {
            let (l, r) = difference_bound_terms(random_complex(rng), random_complex(rng), p);
            ratio(l, r)
        }),
        run("gradient_difference", 2, seed, trials, |rng| {
            let (l, r) = gradient_difference_terms(
                random_complex(rng),
                random_complex(rng),
                random_complex(rng),
                random_complex(rng),
                p,
            );
            ratio(l, r)
        }),
    ];
    for (j, id) in [(2usize, 3u64), (3, 4)] {
        entries.push(run(
            &format!("superposition_gradient_j{j}"),
            id,
            seed,
            trials,
            |rng| {
                let v: Vec<f64> = (0..j).map(|_| random_real(rng)).collect();
                let dv: Vec<f64> = (0..j).map(|_| random_real(rng)).collect();
                let (l, r) = superposition_gradient_terms(&v, &dv, p);
                ratio(l, r)
            },
        ));
    }
    entries.push(run("nonlinear_holder", 5, seed, trials, |rng| {
        let (nt, nx) = (2, 3);
        let cell = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.3) {
                Complex64::new(0.0, 0.0)
            } else {
                random_complex(rng)
            }
        };
        let a: Vec<f64> = (0..nx).map(|_| random_real(rng)).collect();
        let f: Vec<Vec<Complex64>> = (0..nt)
            .map(|_| (0..nx).map(|_| cell(rng)).collect())
            .collect();
        let g: Vec<Vec<Complex64>> = (0..nt)
            .map(|_| (0..nx).map(|_| cell(rng)).collect())
            .collect();
        nonlinear_holder_terms(&a, &f, &g, 0.5, 0.5, p).map_or(f64::NAN, |(l, r)| ratio(l, r))
    }));
    let grid = Grid1D::new(RSE_GRID_N, RSE_HALF_LENGTH)?;
    entries.push(run("refined_sobolev", 6, seed, trials, |rng| {
        let f = random_multiband(&grid, rng);
        match refined_sobolev_ratio(&f, rse_r) {
            Ok(Some(r)) => r.ratio,
            Ok(None) => 0.0,
            Err(_) => f64::NAN,
        }
    }));
    Ok(InequalitySuiteReport { seed, p, entries })
}
