//! Cross-particle independence of momentum increments.

use serde::{Deserialize, Serialize};

use super::gaussianity::{gaussianity_suite, GaussianityOptions, VarianceTolerance, MIN_GAUSSIANITY_SAMPLES};
use super::ks::DEFAULT_KS_SLACK;
use super::moments::correlation;
use super::report::StatReport;
use crate::dynamics::TrajectoryEnsemble;
use crate::error::{Error, Result};

pub const MIN_REPETITIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceOptions {
    /// Bound on every pairwise |corr|; `None` uses `3/sqrt(reps)`.
    pub corr_threshold: Option<f64>,
    pub variance_tolerance: VarianceTolerance,
    pub kurtosis_threshold: Option<f64>,
    pub ks_slack: f64,
}

impl Default for IndependenceOptions {
    fn default() -> Self {
        Self {
            corr_threshold: None,
            variance_tolerance: VarianceTolerance::StdErrors(3.0),
            kurtosis_threshold: None,
            ks_slack: DEFAULT_KS_SLACK,
        }
    }
}

/// Pairwise correlation checks on `increments[particle][repetition]`, then a
/// per-particle gaussianity suite against `N(0, elapsed)` when there are at
/// least 200 repetitions.
pub fn independence_from_increments(increments: &[Vec<f64>], elapsed: f64, opts: &IndependenceOptions) -> Result<Vec<StatReport>> {
    let np = increments.len();
    if np < 2 {
        return Err(Error::Precondition(format!("independence needs at least 2 particles, got {np}")));
    }
    let reps = increments[0].len();
    if reps < MIN_REPETITIONS || increments.iter().any(|v| v.len() != reps) {
        return Err(Error::Precondition(format!("independence needs at least {MIN_REPETITIONS} repetitions per particle")));
    }
    let threshold = opts.corr_threshold.unwrap_or(3.0 / (reps as f64).sqrt());
    let mut out = Vec::new();
    for i in 0..np {
        for j in i + 1..np {
            let r = correlation(&increments[i], &increments[j]);
            let mut rep = StatReport::at_most(format!("|corr({i},{j})|"), r.abs(), threshold, reps);
            if r.is_nan() {
                rep = rep.with_note("undefined correlation: constant increments");
            }
            out.push(rep);
        }
    }
    if reps >= MIN_GAUSSIANITY_SAMPLES {
        let mut g = GaussianityOptions::new(0.0, elapsed).variance_tolerance(opts.variance_tolerance).ks_slack(opts.ks_slack);
        g.kurtosis_threshold = opts.kurtosis_threshold;
        for (l, inc) in increments.iter().enumerate() {
            out.extend(gaussianity_suite(inc, &g)?.into_iter().map(|r| r.prefixed(&format!("particle {l} "))));
        }
    }
    Ok(out)
}

/// [`independence_from_increments`] on `P_l(t) - p0^l` of an ensemble.
pub fn independence_suite(ensemble: &TrajectoryEnsemble, t: f64, opts: &IndependenceOptions) -> Result<Vec<StatReport>> {
    let node = ensemble
        .grid
        .node_at(t)
        .ok_or_else(|| Error::Precondition(format!("t = {t} is outside the recording grid")))?;
    let elapsed = ensemble.grid.time(node) - ensemble.grid.t0;
    independence_from_increments(&ensemble.momentum_increments(node), elapsed, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Stream;

    fn independent(seed: u64, np: usize, reps: usize, var: f64) -> Vec<Vec<f64>> {
        let mut s = Stream::new(seed);
        (0..np).map(|_| (0..reps).map(|_| var.sqrt() * s.normal()).collect()).collect()
    }

    #[test]
    fn independent_samples_pass() {
        let inc = independent(1, 4, 400, 2.0);
        let reps = independence_from_increments(&inc, 2.0, &IndependenceOptions::default()).unwrap();
        assert_eq!(reps.iter().filter(|r| r.name.starts_with("|corr")).count(), 6);
        assert!(reps.iter().all(|r| r.passed), "{reps:?}");
    }

    #[test]
    fn identical_particles_fail() {
        let mut inc = independent(2, 1, 150, 1.0);
        inc.push(inc[0].clone());
        let reps = independence_from_increments(&inc, 1.0, &IndependenceOptions::default()).unwrap();
        assert!((reps[0].value - 1.0).abs() < 1e-12);
        assert!(!reps[0].passed);
    }

    #[test]
    fn preconditions() {
        assert!(independence_from_increments(&independent(3, 1, 400, 1.0), 1.0, &IndependenceOptions::default()).is_err());
        assert!(independence_from_increments(&independent(3, 3, 99, 1.0), 1.0, &IndependenceOptions::default()).is_err());
    }
}
