use std::f64::consts::TAU;

use proptest::prelude::*;
use qldrift_core::dynamics::{wiener_oracle, ParticleState};
use qldrift_core::seed::Stream;
use qldrift_core::stats::{
    gaussianity_suite, independence_from_increments, ks_one_sample, modulus_of_continuity, quadratic_variation, GaussianityOptions,
    IndependenceOptions, DEFAULT_KS_SLACK,
};
use qldrift_core::PathGrid;

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut s = Stream::new(seed);
    (0..n).map(|_| s.normal()).collect()
}

fn brownian(n: usize, dt: f64, seed: u64) -> Vec<f64> {
    let mut s = Stream::new(seed);
    let mut b = 0.0;
    std::iter::once(0.0)
        .chain((0..n).map(|_| {
            b += dt.sqrt() * s.normal();
            b
        }))
        .collect()
}

#[test]
fn ks_accepts_exact_normals_at_nominal_rate() {
    let passes = (0..100).filter(|&seed| ks_one_sample(&normals(2000, seed), 0.0, 1.0, DEFAULT_KS_SLACK).unwrap().passed).count();
    assert!(passes >= 90, "{passes}/100");
}

#[test]
fn ks_rejects_gross_shift_and_tiny_samples() {
    let shifted: Vec<f64> = normals(2000, 1).iter().map(|x| x + 5.0).collect();
    assert!(!ks_one_sample(&shifted, 0.0, 1.0, DEFAULT_KS_SLACK).unwrap().passed);
    assert!(ks_one_sample(&normals(10, 1), 0.0, 1.0, DEFAULT_KS_SLACK).is_err());
    assert!(!ks_one_sample(&[2.0; 100], 0.0, 1.0, DEFAULT_KS_SLACK).unwrap().passed);
}

#[test]
fn constant_samples_fail_the_variance_check() {
    let reports = gaussianity_suite(&[1.0; 500], &GaussianityOptions::new(1.0, 2.0)).unwrap();
    let by_name = |s: &str| reports.iter().find(|r| r.name.contains(s)).unwrap();
    assert!(by_name("mean").passed);
    assert!(!by_name("variance").passed);
    let reports = gaussianity_suite(&[3.0; 500], &GaussianityOptions::new(1.0, 2.0)).unwrap();
    assert!(!reports.iter().find(|r| r.name.contains("mean")).unwrap().passed);
}

#[test]
fn wiener_quadratic_variation_concentrates() {
    let dt = 1e-3;
    let grid = PathGrid::span(TAU, 6283).unwrap();
    assert!((grid.dt - dt).abs() < 1e-6);
    let reps = 200;
    let delta_stride = 50;
    let qv: Vec<f64> = (0..reps)
        .map(|r| {
            let path = wiener_oracle(ParticleState::new(0.0, 0.0), &grid, 1.0, r);
            let p: Vec<f64> = path.states.iter().map(|s| s.p).collect();
            quadratic_variation(&p, grid.dt, delta_stride, None).unwrap()
        })
        .collect();
    let covered = (grid.n_steps / delta_stride * delta_stride) as f64 * grid.dt;
    let delta = delta_stride as f64 * grid.dt;
    // per-path relative sd is sqrt(2 delta / T), about 12.6%, so +-15% holds for roughly 3 paths in 4
    let within = qv.iter().filter(|q| (*q - covered).abs() <= 0.15 * covered).count();
    assert!(within as f64 >= 0.65 * reps as f64, "{within}/{reps}");
    let m = qv.iter().sum::<f64>() / reps as f64;
    assert!((m - covered).abs() <= 4.0 * (2.0 * delta * covered).sqrt() / (reps as f64).sqrt(), "{m}");
    assert!((m - covered).abs() <= 0.03 * covered);
}

#[test]
fn independence_false_positive_rate() {
    let opts = IndependenceOptions::default();
    let mut false_alarms = 0;
    for batch in 0..100u64 {
        let incs: Vec<Vec<f64>> = (0..4).map(|l| normals(100, 1000 * batch + l).iter().map(|z| z * TAU.sqrt()).collect()).collect();
        let reports = independence_from_increments(&incs, TAU, &opts).unwrap();
        if reports.iter().any(|r| r.name.starts_with("|corr") && !r.passed) {
            false_alarms += 1;
        }
    }
    assert!(false_alarms <= 10, "{false_alarms}/100");
}

#[test]
fn identical_particles_are_fully_correlated() {
    let x: Vec<f64> = normals(200, 3);
    let reports = independence_from_increments(&[x.clone(), x], 1.0, &IndependenceOptions::default()).unwrap();
    let corr = reports.iter().find(|r| r.name.starts_with("|corr")).unwrap();
    assert!((corr.value - 1.0).abs() < 1e-12 && !corr.passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ks_is_affine_invariant(seed in any::<u64>(), shift in -50.0f64..50.0, scale in 0.01f64..100.0) {
        let x = normals(300, seed);
        let y: Vec<f64> = x.iter().map(|v| shift + scale * v).collect();
        let a = ks_one_sample(&x, 0.1, 1.2, DEFAULT_KS_SLACK).unwrap();
        let b = ks_one_sample(&y, shift + scale * 0.1, scale * scale * 1.2, DEFAULT_KS_SLACK).unwrap();
        prop_assert!((a.value - b.value).abs() < 1e-9);
        prop_assert_eq!(a.passed, b.passed);
    }

    #[test]
    fn modulus_is_monotone_and_subadditive(seed in any::<u64>(), k1 in 4usize..64, k2 in 4usize..64) {
        let dt = 1.0 / 512.0;
        let path = brownian(1024, dt, seed);
        let (h1, h2) = (k1 as f64 * dt, k2 as f64 * dt);
        let w1 = modulus_of_continuity(&path, dt, h1).unwrap();
        let w2 = modulus_of_continuity(&path, dt, h2).unwrap();
        let w12 = modulus_of_continuity(&path, dt, h1 + h2).unwrap();
        prop_assert!(w12 >= w1.max(w2));
        prop_assert!(w12 <= w1 + w2 + 1e-12);
    }

    #[test]
    fn modulus_of_linear_path_is_h(slope in 0.1f64..10.0, k in 4usize..100) {
        let dt = 0.01;
        let path: Vec<f64> = (0..=400).map(|i| slope * i as f64 * dt).collect();
        let w = modulus_of_continuity(&path, dt, k as f64 * dt).unwrap();
        prop_assert!((w - slope * k as f64 * dt).abs() < 1e-9);
        prop_assert_eq!(modulus_of_continuity(&[3.0; 100], dt, k as f64 * dt).unwrap(), 0.0);
    }
}
