use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::exponents_for;
use crate::propagator::{free_evolve, FreeFlow};
use crate::spectral::{
    dyadic_decomposition, h1_norm, lebesgue_norm, low_pass, Field, SpacetimeAccumulator,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractionConfig {
    /// Power of the nonlinearity; fixes the Lebesgue exponent `r(p)`.
    pub p: f64,
    /// Time search window `[-window, window]`.
    pub window: f64,
    pub window_step: f64,
    /// Below this value of `max_t ‖e^{itΔ}f_n‖_r` nothing is extracted.
    pub detection_threshold: f64,
    /// Fraction of the sequence (from the end) treated as "late".
    pub late_fraction: f64,
    /// Octaves kept above the detection scale when projecting the profile.
    pub octaves: u32,
    /// Exponent used when logging `‖φ‖_{H¹} ≥ κ A (ε/A)^α`.
    pub alpha: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            p: 3.0,
            window: 10.0,
            window_step: 0.05,
            detection_threshold: 1e-2,
            late_fraction: 0.5,
            octaves: 2,
            alpha: 0.5,
        }
    }
}

impl ExtractionConfig {
    fn validate(&self) -> Result<f64> {
        let r = exponents_for(self.p)?.r;
        if !(self.window >= 0.0 && self.window_step > 0.0 && self.window.is_finite()) {
            return Err(Error::Domain(
                "time window must be finite with a positive step".into(),
            ));
        }
        if !(self.detection_threshold > 0.0) {
            return Err(Error::Domain("detection threshold must be positive".into()));
        }
        if !(self.late_fraction > 0.0 && self.late_fraction <= 1.0) {
            return Err(Error::Domain("late fraction must lie in (0, 1]".into()));
        }
        Ok(r)
    }

    /// Sample times, symmetric about and including 0.
    pub fn times(&self) -> Vec<f64> {
        let m = (self.window / self.window_step).floor() as i64;
        (-m..=m).map(|i| i as f64 * self.window_step).collect()
    }
}

/// One concentration profile with its per-element parameters; element `n`
/// carries the component `e^{-it_nΔ} φ(x - x_n)`.
#[derive(Clone, Debug)]
pub struct Bubble {
    pub profile: Field,
    pub time_shifts: Vec<f64>,
    pub space_shifts: Vec<f64>,
    /// Dyadic frequency of concentration.
    pub scale: f64,
}

impl Bubble {
    pub fn component(&self, n: usize) -> Field {
        free_evolve(
            &self.profile.translate(self.space_shifts[n]),
            -self.time_shifts[n],
        )
        .with_time(0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundLog {
    /// Late average of `‖f_n‖_{H¹}`.
    pub h1_bound: f64,
    /// Late average of the windowed `L_t^{2p} L_x^r` norm.
    pub epsilon: f64,
    pub profile_h1: f64,
    pub alpha: f64,
    pub kappa: f64,
}

#[derive(Clone, Debug)]
pub enum Extraction {
    NoBubble {
        peak: f64,
    },
    Found {
        bubble: Bubble,
        residuals: Vec<Field>,
        lower_bound: LowerBoundLog,
    },
}

struct Scan {
    peak_norm: f64,
    peak_time: f64,
    strichartz: f64,
}

fn scan(f: &Field, times: &[f64], p: f64, r: f64) -> Result<Scan> {
    let flow = FreeFlow::new(f);
    let norms: Vec<f64> = times
        .par_iter()
        .map(|&t| lebesgue_norm(&flow.at(t), r))
        .collect::<Result<_>>()?;
    let mut acc = SpacetimeAccumulator::new(2.0 * p, r)?;
    let mut best = (0.0f64, 0.0f64);
    for (&t, &n) in times.iter().zip(&norms) {
        acc.accumulate_norm(t, n)?;
        if n > best.0 || (n == best.0 && t.abs() < best.1.abs()) {
            best = (n, t);
        }
    }
    Ok(Scan {
        peak_norm: best.0,
        peak_time: best.1,
        strichartz: acc.finalize(),
    })
}

/// Windowed `‖e^{itΔ}f‖_{L_t^{2p} L_x^r}` over the configured sample times.
pub fn windowed_strichartz(f: &Field, cfg: &ExtractionConfig) -> Result<f64> {
    let r = cfg.validate()?;
    Ok(scan(f, &cfg.times(), cfg.p, r)?.strichartz)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn late_range(len: usize, fraction: f64) -> std::ops::Range<usize> {
    let count = ((len as f64 * fraction).ceil() as usize).max(3).min(len);
    len - count..len
}

/// One inverse-Strichartz step on a sequence: locate time, frequency and
/// position of concentration for every element, recentre, and estimate the
/// profile from the late elements by a componentwise median followed by a
/// low-pass at `2^octaves` times the detection scale.
pub fn extract_bubble(seq: &[Field], cfg: &ExtractionConfig) -> Result<Extraction> {
    let r = cfg.validate()?;
    if seq.len() < 4 {
        return Err(Error::Domain(format!(
            "sequence needs at least 4 elements, got {}",
            seq.len()
        )));
    }
    let grid = seq[0].grid().clone();
    for f in seq {
        if !f.grid().same_as(&grid) {
            return Err(Error::GridMismatch);
        }
    }
    let times = cfg.times();
    let scans: Vec<Scan> = seq
        .iter()
        .map(|f| scan(f, &times, cfg.p, r))
        .collect::<Result<_>>()?;
    let late = late_range(seq.len(), cfg.late_fraction);
    let peak = median(scans[late.clone()].iter().map(|s| s.peak_norm).collect());
    if !(peak >= cfg.detection_threshold) {
        return Ok(Extraction::NoBubble { peak });
    }

    let n = grid.n();
    let mut time_shifts = Vec::with_capacity(seq.len());
    let mut space_shifts = Vec::with_capacity(seq.len());
    let mut scales = Vec::with_capacity(seq.len());
    let mut recentred = Vec::with_capacity(seq.len());
    for (f, s) in seq.iter().zip(&scans) {
        let g = free_evolve(f, s.peak_time).with_time(0.0);
        let mut best: Option<(f64, Field, f64)> = None;
        for block in dyadic_decomposition(&g) {
            let norm = lebesgue_norm(&block.field, r)?;
            if best.as_ref().is_none_or(|b| norm > b.0) {
                best = Some((norm, block.field, block.scale));
            }
        }
        let (_, projected, scale) = best.expect("at least one dyadic block");
        let j = projected
            .samples()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(j, _)| j)
            .expect("nonempty grid");
        time_shifts.push(s.peak_time);
        space_shifts.push(grid.x(j));
        scales.push(scale);
        recentred.push(g.roll(n as isize / 2 - j as isize));
    }

    let scale = median(scales[late.clone()].to_vec());
    let medians: Vec<Complex64> = (0..n)
        .map(|i| {
            let re = median(
                recentred[late.clone()]
                    .iter()
                    .map(|g| g.samples()[i].re)
                    .collect(),
            );
            let im = median(
                recentred[late.clone()]
                    .iter()
                    .map(|g| g.samples()[i].im)
                    .collect(),
            );
            Complex64::new(re, im)
        })
        .collect();
    let raw = Field::new(&grid, medians, 0.0)?;
    let profile = low_pass(&raw, scale * 2f64.powi(cfg.octaves as i32))?;
    let bubble = Bubble {
        profile,
        time_shifts,
        space_shifts,
        scale,
    };
    let residuals = seq
        .iter()
        .enumerate()
        .map(|(i, f)| f.sub(&bubble.component(i)))
        .collect::<Result<Vec<_>>>()?;

    let h1_bound = late.clone().map(|i| h1_norm(&seq[i])).sum::<f64>() / late.len() as f64;
    let epsilon = late.clone().map(|i| scans[i].strichartz).sum::<f64>() / late.len() as f64;
    let profile_h1 = h1_norm(&bubble.profile);
    let kappa = if h1_bound > 0.0 && epsilon > 0.0 {
        profile_h1 / (h1_bound * (epsilon / h1_bound).powf(cfg.alpha))
    } else {
        f64::NAN
    };
    Ok(Extraction::Found {
        bubble,
        residuals,
        lower_bound: LowerBoundLog {
            h1_bound,
            epsilon,
            profile_h1,
            alpha: cfg.alpha,
            kappa,
        },
    })
}
