mod common;

use common::{gaussian, l2, max_abs_diff};
use inls::diagnostics::inequality_suite_with_r;
use inls::model::{mass, Inhomogeneity};
use inls::profiles::{
    decompose, decoupling_check, extract_bubble, load_sequence, refined_sobolev_ratio,
    write_sequence, Bubble, Extraction, ExtractionConfig,
};
use inls::spectral::{h1_distance, Field, Grid1D};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid1D {
    Grid1D::new(2048, 102.4).unwrap()
}

/// Bubbles of amplitudes 1 and `small` drifting apart, separation `20n`.
fn two_bubbles(g: &Grid1D, small: f64, len: usize) -> Vec<Field> {
    (1..=len)
        .map(|n| {
            let d = 10.0 * n as f64;
            gaussian(g, 1.0, d).add(&gaussian(g, small, -d)).unwrap()
        })
        .collect()
}

#[test]
fn larger_bubble_is_extracted_first() {
    let g = grid();
    let small = 0.6;
    let seq = two_bubbles(&g, small, 6);
    let Extraction::Found {
        bubble, residuals, ..
    } = extract_bubble(&seq, &ExtractionConfig::default()).unwrap()
    else {
        panic!("no bubble found");
    };
    assert!(h1_distance(&bubble.profile, &gaussian(&g, 1.0, 0.0)).unwrap() <= 1e-3);
    for (n, x) in bubble.space_shifts.iter().enumerate() {
        assert!(
            (x - 10.0 * (n + 1) as f64).abs() <= 2.0 * g.dx(),
            "shift {n}: {x}"
        );
    }
    let second = mass(&gaussian(&g, small, 0.0));
    for w in &residuals {
        assert!(
            (mass(w) - second).abs() <= 0.01 * second,
            "{} vs {second}",
            mass(w)
        );
    }
}

#[test]
fn extraction_is_idempotent_on_single_bubbles() {
    let g = grid();
    let seq: Vec<Field> = (0..6)
        .map(|n| gaussian(&g, 1.0, 10.0 * n as f64 - 30.0))
        .collect();
    let cfg = ExtractionConfig::default();
    let Extraction::Found { residuals, .. } = extract_bubble(&seq, &cfg).unwrap() else {
        panic!("no bubble found");
    };
    assert!(matches!(
        extract_bubble(&residuals, &cfg).unwrap(),
        Extraction::NoBubble { .. }
    ));
}

#[test]
fn remainders_lose_their_strichartz_norm() {
    let g = grid();
    let seq = two_bubbles(&g, 0.6, 6);
    let rep = decompose(
        &seq,
        &ExtractionConfig::default(),
        4,
        &Inhomogeneity::zero(&g),
    )
    .unwrap();
    assert_eq!(rep.bubbles.len(), 2);
    for (orig, rem) in rep
        .original_strichartz
        .iter()
        .zip(&rep.remainder_strichartz)
    {
        assert!(*rem <= 0.1 * orig, "{rem} vs {orig}");
    }
    assert!(rep.decoupling.max_relative_mass_residual() <= 1e-3);
}

#[test]
fn mass_decoupling_improves_with_separation() {
    let g = grid();
    let p = 3.0;
    let residual = |sep: f64| {
        let f = gaussian(&g, 1.0, -sep / 2.0)
            .add(&gaussian(&g, 1.0, sep / 2.0))
            .unwrap();
        let bubble = |x0: f64| Bubble {
            profile: gaussian(&g, 1.0, 0.0),
            time_shifts: vec![0.0; 4],
            space_shifts: vec![x0; 4],
            scale: 1.0,
        };
        decoupling_check(
            &vec![f; 4],
            &[bubble(-sep / 2.0), bubble(sep / 2.0)],
            &vec![Field::zeros(&g); 4],
            &Inhomogeneity::zero(&g),
            p,
        )
        .unwrap()
        .max_relative_mass_residual()
    };
    let seps = [1.0, 2.0, 3.0, 4.0, 6.0, 8.0];
    let values: Vec<f64> = seps.iter().map(|&s| residual(s)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn refined_sobolev_constant_is_stable_across_seeds() {
    let constants: Vec<f64> = [1u64, 2, 3]
        .iter()
        .map(|&s| {
            inequality_suite_with_r(s, 1000, 3.0, 4.0)
                .unwrap()
                .entry("refined_sobolev")
                .unwrap()
                .max_ratio
        })
        .collect();
    let (lo, hi) = constants
        .iter()
        .fold((f64::MAX, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
    assert!(lo > 0.0 && hi.is_finite());
    assert!((hi - lo) <= 0.15 * hi, "{constants:?}");
}

#[test]
fn refined_sobolev_ratio_is_scale_free() {
    let g = grid();
    let f = gaussian(&g, 1.0, 0.0);
    let a = refined_sobolev_ratio(&f, 4.0).unwrap().unwrap();
    let b = refined_sobolev_ratio(&f.scale(inls::Complex64::new(0.0, 3.0)), 4.0)
        .unwrap()
        .unwrap();
    assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sequence_directory_round_trip(seed in any::<u64>(), len in 1usize..5) {
        let g = Grid1D::new(64, 8.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<Field> = (0..len).map(|i| common::random_packets(&mut rng, &g, 2).with_time(i as f64)).collect();
        let dir = tempfile::tempdir().unwrap();
        write_sequence(dir.path(), &seq).unwrap();
        let back = load_sequence(dir.path()).unwrap();
        prop_assert_eq!(back.len(), seq.len());
        for (a, b) in back.iter().zip(&seq) {
            prop_assert_eq!(max_abs_diff(a, b), 0.0);
            prop_assert_eq!(a.time(), b.time());
            prop_assert!(l2(a) > 0.0);
        }
    }
}
