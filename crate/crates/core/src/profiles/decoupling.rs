use serde::Serialize;

use super::extract::{
    extract_bubble, windowed_strichartz, Bubble, Extraction, ExtractionConfig, LowerBoundLog,
};
use crate::model::{energy, mass, Inhomogeneity};
use crate::spectral::Field;
use crate::{Error, Result};

/// Pairwise statistic `|t_n^j - t_n^k| + |x_n^j - x_n^k|` for every `n`.
#[derive(Clone, Debug, Serialize)]
pub struct PairSeparation {
    pub j: usize,
    pub k: usize,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecouplingReport {
    /// `|M(f_n) - Σ_j M(φ^j) - M(w_n)|`
    pub mass_residuals: Vec<f64>,
    /// `|E(f_n) - Σ_j E(component_n^j) - E(w_n)|`
    pub energy_residuals: Vec<f64>,
    pub total_masses: Vec<f64>,
    pub separations: Vec<PairSeparation>,
}

impl DecouplingReport {
    pub fn max_relative_mass_residual(&self) -> f64 {
        self.mass_residuals
            .iter()
            .zip(&self.total_masses)
            .map(|(r, m)| if *m > 0.0 { r / m } else { *r })
            .fold(0.0, f64::max)
    }
}

pub fn decoupling_check(
    seq: &[Field],
    bubbles: &[Bubble],
    remainders: &[Field],
    a: &Inhomogeneity,
    p: f64,
) -> Result<DecouplingReport> {
    if remainders.len() != seq.len() {
        return Err(Error::LengthMismatch {
            expected: seq.len(),
            actual: remainders.len(),
        });
    }
    for b in bubbles {
        if b.time_shifts.len() != seq.len() || b.space_shifts.len() != seq.len() {
            return Err(Error::LengthMismatch {
                expected: seq.len(),
                actual: b.time_shifts.len().min(b.space_shifts.len()),
            });
        }
        if !b.profile.grid().same_as(a.grid()) {
            return Err(Error::GridMismatch);
        }
    }
    let profile_mass: f64 = bubbles.iter().map(|b| mass(&b.profile)).sum();
    let mut report = DecouplingReport {
        mass_residuals: Vec::with_capacity(seq.len()),
        energy_residuals: Vec::with_capacity(seq.len()),
        total_masses: Vec::with_capacity(seq.len()),
        separations: Vec::new(),
    };
    for (n, (f, w)) in seq.iter().zip(remainders).enumerate() {
        f.ensure_same_grid(w)?;
        let m = mass(f);
        report.total_masses.push(m);
        report
            .mass_residuals
            .push((m - profile_mass - mass(w)).abs());
        let mut e = energy(f, a, p)? - energy(w, a, p)?;
        for b in bubbles {
            e -= energy(&b.component(n), a, p)?;
        }
        report.energy_residuals.push(e.abs());
    }
    for j in 0..bubbles.len() {
        for k in j + 1..bubbles.len() {
            let (bj, bk) = (&bubbles[j], &bubbles[k]);
            report.separations.push(PairSeparation {
                j,
                k,
                values: (0..seq.len())
                    .map(|n| {
                        (bj.time_shifts[n] - bk.time_shifts[n]).abs()
                            + (bj.space_shifts[n] - bk.space_shifts[n]).abs()
                    })
                    .collect(),
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub bubbles: Vec<Bubble>,
    pub lower_bounds: Vec<LowerBoundLog>,
    pub remainders: Vec<Field>,
    pub decoupling: DecouplingReport,
    /// Windowed Strichartz norms of the original elements.
    pub original_strichartz: Vec<f64>,
    /// Windowed Strichartz norms of the final remainders.
    pub remainder_strichartz: Vec<f64>,
}

/// Repeated extraction until no bubble is detected or `max_bubbles` is
/// reached.
pub fn decompose(
    seq: &[Field],
    cfg: &ExtractionConfig,
    max_bubbles: usize,
    a: &Inhomogeneity,
) -> Result<DecompositionReport> {
    let mut bubbles = Vec::new();
    let mut lower_bounds = Vec::new();
    let mut current: Vec<Field> = seq.to_vec();
    while bubbles.len() < max_bubbles {
        match extract_bubble(&current, cfg)? {
            Extraction::NoBubble { .. } => break,
            Extraction::Found {
                bubble,
                residuals,
                lower_bound,
            } => {
                bubbles.push(bubble);
                lower_bounds.push(lower_bound);
                current = residuals;
            }
        }
    }
    let decoupling = decoupling_check(seq, &bubbles, &current, a, cfg.p)?;
    let original_strichartz = seq
        .iter()
        .map(|f| windowed_strichartz(f, cfg))
        .collect::<Result<_>>()?;
    let remainder_strichartz = current
        .iter()
        .map(|f| windowed_strichartz(f, cfg))
        .collect::<Result<_>>()?;
    Ok(DecompositionReport {
        bubbles,
        lower_bounds,
        remainders: current,
        decoupling,
        original_strichartz,
        remainder_strichartz,
    })
}
