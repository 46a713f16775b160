#![allow(dead_code)]

use std::f64::consts::PI;

use inls::model::Inhomogeneity;
use inls::spectral::{Field, Grid1D};
use inls::Complex64;
use rand::Rng;

pub fn gaussian(grid: &Grid1D, amp: f64, x0: f64) -> Field {
    Field::from_real_fn(grid, |x| amp * (-(x - x0).powi(2) / 2.0).exp()).unwrap()
}

pub fn bump(grid: &Grid1D) -> Inhomogeneity {
    Inhomogeneity::from_expr(grid, &"exp(-x^2)".parse().unwrap(), 1e-8).unwrap()
}

/// Random lattice wavenumbers with `|k| <= k_cut`, strictly below Nyquist.
pub fn random_mode_list<R: Rng>(
    rng: &mut R,
    grid: &Grid1D,
    k_cut: f64,
    count: usize,
) -> Vec<(f64, Complex64)> {
    let dk = grid.dk();
    let m_max = ((k_cut / dk).floor() as i64).min(grid.n() as i64 / 2 - 1);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(-m_max..=m_max);
            let c = Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..2.0 * PI));
            (m as f64 * dk, c)
        })
        .collect()
}

/// `Σ c (ik)^order e^{ikx}` sampled on the grid.
pub fn synthesize(grid: &Grid1D, modes: &[(f64, Complex64)], order: i32) -> Field {
    Field::from_fn(grid, |x| {
        modes
            .iter()
            .map(|(k, c)| {
                c * Complex64::new(0.0, *k).powi(order) * Complex64::from_polar(1.0, k * x)
            })
            .sum()
    })
    .unwrap()
}

/// Sum of a few lattice Fourier modes with `|k| <= k_cut`; exactly periodic.
pub fn random_modes<R: Rng>(rng: &mut R, grid: &Grid1D, k_cut: f64, count: usize) -> Field {
    synthesize(grid, &random_mode_list(rng, grid, k_cut, count), 0)
}

/// Superposition of Gaussian wave packets localized well inside the box.
pub fn random_packets<R: Rng>(rng: &mut R, grid: &Grid1D, count: usize) -> Field {
    let l = grid.half_length();
    let packets: Vec<[f64; 5]> = (0..count)
        .map(|_| {
            [
                rng.gen_range(-0.3 * l..0.3 * l),
                rng.gen_range(0.7..2.5),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.1..1.5),
                rng.gen_range(0.0..2.0 * PI),
            ]
        })
        .collect();
    Field::from_fn(grid, |x| {
        packets
            .iter()
            .map(|&[x0, w, k, amp, phase]| {
                Complex64::from_polar(amp * (-((x - x0) / w).powi(2) / 2.0).exp(), k * x + phase)
            })
            .sum()
    })
    .unwrap()
}

pub fn max_abs_diff(a: &Field, b: &Field) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn l2(u: &Field) -> f64 {
    inls::spectral::lebesgue_norm(u, 2.0).unwrap()
}
