//! Kolmogorov–Smirnov distances and verdicts.

use statrs::distribution::{ContinuousCDF, Normal};

use super::report::StatReport;
use crate::error::{Error, Result};

/// Asymptotic 5% critical value of the Kolmogorov distribution.
pub const KS_CRITICAL_5PCT: f64 = 1.36;
pub const DEFAULT_KS_SLACK: f64 = 1.5;

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// `sup_x |F_n(x) - Phi((x - mean)/sd)|`.
pub fn ks_distance_normal(samples: &[f64], mean: f64, variance: f64) -> f64 {
    let normal = Normal::new(mean, variance.sqrt()).expect("positive variance");
    let xs = sorted(samples);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = normal.cdf(x);
        d.max((i + 1) as f64 / n - f).max(f - i as f64 / n)
    })
}

/// Two-sample distance `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_two_sample_distance(a: &[f64], b: &[f64]) -> f64 {
    let (xa, xb) = (sorted(a), sorted(b));
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// One-sample test against `N(mean, variance)`; threshold `1.36/sqrt(n)` times `slack`.
pub fn ks_one_sample(samples: &[f64], mean: f64, variance: f64, slack: f64) -> Result<StatReport> {
    let n = samples.len();
    if n < 50 {
        return Err(Error::Precondition(format!("KS test needs at least 50 samples, got {n}")));
    }
    if !(variance > 0.0) {
        return Err(Error::Precondition(format!("KS reference variance must be positive, got {variance}")));
    }
    let threshold = KS_CRITICAL_5PCT / (n as f64).sqrt() * slack;
    if samples.iter().all(|&x| x == samples[0]) {
        let d = ks_distance_normal(samples, mean, variance);
        return Ok(StatReport::failed("KS distance", d, threshold, n, "degenerate sample: all values equal"));
    }
    Ok(StatReport::at_most("KS distance", ks_distance_normal(samples, mean, variance), threshold, n))
}

/// Two-sample test; threshold `1.36 sqrt((n_a + n_b)/(n_a n_b))` times `slack`.
pub fn ks_two_sample(a: &[f64], b: &[f64], slack: f64) -> Result<StatReport> {
    if a.len() < 50 || b.len() < 50 {
        return Err(Error::Precondition("two-sample KS needs at least 50 samples per side".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let threshold = KS_CRITICAL_5PCT * ((na + nb) / (na * nb)).sqrt() * slack;
    Ok(StatReport::at_most("two-sample KS distance", ks_two_sample_distance(a, b), threshold, a.len().min(b.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Stream;

    #[test]
    fn distance_of_tiny_samples() {
        // one point at the median: F jumps 0 -> 1 where Phi = 1/2
        assert!((ks_distance_normal(&[0.0], 0.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(ks_two_sample_distance(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample_distance(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample_distance(&[1.0, 2.0, 3.0, 4.0], &[2.5, 10.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_normals_pass_most_seeds() {
        let mut passes = 0;
        for seed in 0..100 {
            let mut s = Stream::new(seed);
            let xs: Vec<f64> = (0..2000).map(|_| s.normal()).collect();
            if ks_one_sample(&xs, 0.0, 1.0, DEFAULT_KS_SLACK).unwrap().passed {
                passes += 1;
            }
        }
        assert!(passes >= 90, "{passes}");
    }

    #[test]
    fn gross_shift_fails_and_small_n_is_rejected() {
        let mut s = Stream::new(1);
        let xs: Vec<f64> = (0..500).map(|_| s.normal() + 5.0).collect();
        assert!(!ks_one_sample(&xs, 0.0, 1.0, DEFAULT_KS_SLACK).unwrap().passed);
        assert!(ks_one_sample(&xs[..10], 0.0, 1.0, 1.5).is_err());
        assert!(ks_one_sample(&xs, 0.0, 0.0, 1.5).is_err());
        let flat = vec![0.0; 100];
        let r = ks_one_sample(&flat, 0.0, 1.0, 1.5).unwrap();
        assert!(!r.passed && r.note.is_some());
    }
}
