mod common;

use common::{bump, gaussian, l2, max_abs_diff, random_packets};
use inls::evolve::{
    decode_checkpoint, encode_checkpoint, extract_scattering_state, integrate, read_checkpoint,
    solve_final_state, solve_ivp, step_strang, write_checkpoint, ScatteringStatus, SolverConfig,
};
use inls::model::{mass, nonlinearity, Inhomogeneity};
use inls::propagator::free_evolve;
use inls::spectral::{h1_distance, h1_norm, Field, Grid1D};
use inls::{Complex64, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(dt: f64, t_end: f64) -> SolverConfig {
    SolverConfig {
        dt,
        t_end,
        checkpoint_every: usize::MAX / 2,
        diagnostics_every: 10,
        ..SolverConfig::default()
    }
}

fn small_grid() -> Grid1D {
    Grid1D::new(512, 32.0).unwrap()
}

#[test]
fn global_error_is_second_order() {
    let g = small_grid();
    let (u0, a) = (gaussian(&g, 1.0, 0.0), bump(&g));
    let at = |dt: f64| integrate(&u0, &a, 3.0, dt, (1.0 / dt).round() as usize).unwrap();
    let dt = 0.02;
    let reference = at(dt / 8.0);
    let e1 = l2(&at(dt).sub(&reference).unwrap());
    let e2 = l2(&at(dt / 2.0).sub(&reference).unwrap());
    let ratio = e1 / e2;
    assert!(
        (3.6..=4.4).contains(&ratio),
        "ratio {ratio} ({e1:e}, {e2:e})"
    );
}

#[test]
fn energy_drift_shrinks_quadratically() {
    let g = small_grid();
    let (u0, a) = (gaussian(&g, 1.0, 0.0), bump(&g));
    let drift = |dt: f64| {
        solve_ivp(&u0, &a, 3.0, &cfg(dt, 2.0))
            .unwrap()
            .status
            .energy_drift
    };
    let (d1, d2) = (drift(0.02), drift(0.01));
    assert!(d1 > 0.0 && d1 / d2 >= 3.5, "{d1:e} -> {d2:e}");
}

#[test]
fn mass_drift_stays_at_roundoff() {
    let g = small_grid();
    let u0 = random_packets(&mut ChaCha8Rng::seed_from_u64(4), &g, 3);
    let traj = solve_ivp(&u0, &bump(&g), 3.0, &cfg(0.01, 2.0)).unwrap();
    assert!(traj.status.mass_drift < 1e-12 * traj.status.steps as f64);
}

#[test]
fn duhamel_residual_is_second_order() {
    let g = small_grid();
    let (u0, a, p) = (gaussian(&g, 1.0, 0.0), bump(&g), 3.0);
    let residual = |dt: f64| {
        let mut c = cfg(dt, 1.0);
        c.checkpoint_every = 1;
        let traj = solve_ivp(&u0, &a, p, &c).unwrap();
        let t = traj.t_final();
        let mut integral = Field::zeros(&g);
        let n = traj.checkpoints.len();
        for (j, u) in traj.checkpoints.iter().enumerate() {
            let w = if j == 0 || j == n - 1 { 0.5 * dt } else { dt };
            let term = free_evolve(&nonlinearity(u, &a, p).unwrap(), t - u.time());
            integral = integral.add(&term.scale(Complex64::new(w, 0.0))).unwrap();
        }
        let rhs = free_evolve(&u0, t)
            .sub(&integral.scale(Complex64::i()))
            .unwrap();
        l2(&traj.last().sub(&rhs).unwrap())
    };
    let (r1, r2) = (residual(0.02), residual(0.01));
    assert!(r1 < 1e-3, "{r1:e}");
    assert!(r1 / r2 >= 3.0, "{r1:e} -> {r2:e}");
}

#[test]
fn far_translates_approach_free_flow() {
    let g = Grid1D::new(1024, 80.0).unwrap();
    let a = bump(&g);
    let dist: Vec<f64> = [5.0, 10.0, 20.0]
        .iter()
        .map(|&x0| {
            let u0 = Field::from_real_fn(&g, |x| (-((x - x0) / 2.0).powi(2) / 2.0).exp()).unwrap();
            let traj = solve_ivp(&u0, &a, 3.0, &cfg(0.01, 5.0)).unwrap();
            assert!(traj.status.completed);
            h1_distance(traj.last(), &free_evolve(&u0, 5.0)).unwrap()
        })
        .collect();
    assert!(dist.windows(2).all(|w| w[1] <= w[0] + 1e-3), "{dist:?}");
    assert!(dist[2] < dist[0]);
}

#[test]
fn zero_data_stays_zero_and_scatters_to_zero() {
    let g = small_grid();
    let u0 = Field::zeros(&g);
    let mut c = cfg(0.05, 30.0);
    c.checkpoint_every = 40;
    let traj = solve_ivp(&u0, &bump(&g), 3.0, &c).unwrap();
    assert!(traj.checkpoints.iter().all(|u| l2(u) == 0.0));
    let rep = extract_scattering_state(&traj, &c).unwrap();
    assert_eq!(rep.status, ScatteringStatus::Scattered);
    assert_eq!(h1_norm(&rep.u_plus), 0.0);

    let back = solve_final_state(&u0, &bump(&g), 3.0, &c).unwrap();
    assert!(back.checkpoints.iter().all(|u| l2(u) == 0.0));
}

#[test]
fn final_state_without_nonlinearity_is_free() {
    let g = Grid1D::new(1024, 128.0).unwrap();
    let u_plus = gaussian(&g, 0.3, 0.0);
    let mut c = cfg(0.05, 10.0);
    c.t_big = 5.0;
    c.final_state_tail = 2.0;
    let traj = solve_final_state(&u_plus, &Inhomogeneity::zero(&g), 3.0, &c).unwrap();
    assert!(max_abs_diff(&traj.checkpoints[0], &u_plus) <= 1e-12);
    let end = traj.last();
    assert!(max_abs_diff(end, &free_evolve(&u_plus, end.time())) <= 1e-12);
}

#[test]
fn short_trajectories_cannot_report_scattering() {
    let g = small_grid();
    let traj = solve_ivp(&gaussian(&g, 0.1, 0.0), &bump(&g), 3.0, &cfg(0.05, 5.0)).unwrap();
    let err = extract_scattering_state(&traj, &SolverConfig::default()).unwrap_err();
    assert!(matches!(err, Error::TrajectoryTooShort { .. }));
}

#[test]
fn checkpoint_file_round_trip_is_bit_exact() {
    let g = small_grid();
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..5 {
        let u = random_packets(&mut rng, &g, 3).with_time(0.1 * i as f64 + 1.0 / 3.0);
        let path = dir.path().join(format!("c{i}.bin"));
        write_checkpoint(&path, &u).unwrap();
        let back = read_checkpoint(&path, None).unwrap();
        assert_eq!(back.time().to_bits(), u.time().to_bits());
        for (x, y) in back.samples().iter().zip(u.samples()) {
            assert_eq!(
                (x.re.to_bits(), x.im.to_bits()),
                (y.re.to_bits(), y.im.to_bits())
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn strang_step_is_time_symmetric(seed in any::<u64>(), dt in 1e-3f64..0.1, p in 2.5f64..6.0) {
        let g = Grid1D::new(256, 16.0).unwrap();
        let u = random_packets(&mut ChaCha8Rng::seed_from_u64(seed), &g, 3);
        let a = bump(&g);
        let back = step_strang(&step_strang(&u, &a, p, dt).unwrap(), &a, p, -dt).unwrap();
        prop_assert!(max_abs_diff(&back, &u) <= 1e-11);
    }

    #[test]
    fn strang_step_preserves_mass(seed in any::<u64>(), dt in 1e-3f64..0.1) {
        let g = Grid1D::new(256, 16.0).unwrap();
        let u = random_packets(&mut ChaCha8Rng::seed_from_u64(seed), &g, 3);
        let m = mass(&u);
        let v = step_strang(&u, &bump(&g), 3.0, dt).unwrap();
        prop_assert!((mass(&v) - m).abs() <= 1e-12 * m);
    }

    #[test]
    fn checkpoint_bytes_round_trip(seed in any::<u64>(), t in -1e3f64..1e3) {
        let g = Grid1D::new(64, 5.0).unwrap();
        let u = random_packets(&mut ChaCha8Rng::seed_from_u64(seed), &g, 2).with_time(t);
        let bytes = encode_checkpoint(&u);
        let back = decode_checkpoint(&bytes, Some(&g), std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(encode_checkpoint(&back), bytes);
    }
}
