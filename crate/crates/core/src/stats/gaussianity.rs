//! Marginal normality checks for real and complex samples.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ks::{ks_one_sample, DEFAULT_KS_SLACK};
use super::moments::{complex_mean, excess_kurtosis, mean, variance};
use super::report::StatReport;
use crate::error::{Error, Result};

pub const MIN_GAUSSIANITY_SAMPLES: usize = 200;

/// How far the sample variance may sit from its target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum VarianceTolerance {
    /// Fraction of the target.
    Relative(f64),
    /// Multiples of the normal-theory standard error `target * sqrt(2/(n-1))`.
    StdErrors(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianityOptions {
    pub mean: f64,
    pub variance: f64,
    pub variance_tolerance: VarianceTolerance,
    /// Bound on |excess kurtosis|; `None` uses `3 sqrt(24/n)`.
    pub kurtosis_threshold: Option<f64>,
    pub ks_slack: f64,
}

impl GaussianityOptions {
    pub fn new(mean: f64, variance: f64) -> Self {
        Self {
            mean,
            variance,
            variance_tolerance: VarianceTolerance::Relative(0.10),
            kurtosis_threshold: None,
            ks_slack: DEFAULT_KS_SLACK,
        }
    }

    pub fn variance_tolerance(mut self, tol: VarianceTolerance) -> Self {
        self.variance_tolerance = tol;
        self
    }

    pub fn kurtosis_threshold(mut self, threshold: f64) -> Self {
        self.kurtosis_threshold = Some(threshold);
        self
    }

    pub fn ks_slack(mut self, slack: f64) -> Self {
        self.ks_slack = slack;
        self
    }
}

pub fn default_kurtosis_threshold(n: usize) -> f64 {
    3.0 * (24.0 / n as f64).sqrt()
}

/// Mean, variance, excess kurtosis and KS verdicts against `N(mean, variance)`.
pub fn gaussianity_suite(samples: &[f64], opts: &GaussianityOptions) -> Result<Vec<StatReport>> {
    let n = samples.len();
    if n < MIN_GAUSSIANITY_SAMPLES {
        return Err(Error::Precondition(format!(
            "gaussianity suite needs at least {MIN_GAUSSIANITY_SAMPLES} samples, got {n}"
        )));
    }
    let ks = ks_one_sample(samples, opts.mean, opts.variance, opts.ks_slack)?;
    let nf = n as f64;
    let m = mean(samples);
    let v = variance(samples);
    let se_mean = (v / nf).sqrt();
    let mean_report = StatReport::within("mean", m, opts.mean, 3.0 * se_mean, n).with_std_error(se_mean);

    let se_var = opts.variance * (2.0 / (nf - 1.0)).sqrt();
    let var_tol = match opts.variance_tolerance {
        VarianceTolerance::Relative(r) => r * opts.variance,
        VarianceTolerance::StdErrors(k) => k * se_var,
    };
    let var_report = StatReport::within("variance", v, opts.variance, var_tol, n).with_std_error(se_var);

    let kt = opts.kurtosis_threshold.unwrap_or_else(|| default_kurtosis_threshold(n));
    let k = excess_kurtosis(samples);
    let mut kurt_report = StatReport::within("excess kurtosis", k, 0.0, kt, n).with_std_error((24.0 / nf).sqrt());
    if k.is_nan() {
        kurt_report = kurt_report.with_note("undefined for a constant sample");
    }
    Ok(vec![mean_report, var_report, kurt_report, ks])
}

/// Runs [`gaussianity_suite`] on both components, each against `N(0, component_variance)`,
/// plus the Re/Im cross-covariance and `|E Z^2|` checks.
pub fn complex_gaussianity_suite(samples: &[Complex64], opts: &GaussianityOptions) -> Result<Vec<StatReport>> {
    let re: Vec<f64> = samples.iter().map(|z| z.re).collect();
    let im: Vec<f64> = samples.iter().map(|z| z.im).collect();
    let mut out: Vec<StatReport> = gaussianity_suite(&re, opts)?.into_iter().map(|r| r.prefixed("re ")).collect();
    out.extend(gaussianity_suite(&im, opts)?.into_iter().map(|r| r.prefixed("im ")));

    let n = samples.len();
    let (mr, mi) = (mean(&re), mean(&im));
    let prods: Vec<f64> = re.iter().zip(&im).map(|(x, y)| (x - mr) * (y - mi)).collect();
    let cov = mean(&prods);
    let se_cov = (variance(&prods) / n as f64).sqrt();
    out.push(StatReport::at_most("|re/im covariance|", cov.abs(), 3.0 * se_cov, n).with_std_error(se_cov));

    let sq: Vec<Complex64> = samples.iter().map(|z| z * z).collect();
    let (m2, se2) = complex_mean(&sq);
    out.push(StatReport::at_most("|E Z^2|", m2.norm(), 3.0 * se2, n).with_std_error(se2));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Stream;

    fn normals(seed: u64, n: usize, sd: f64) -> Vec<f64> {
        let mut s = Stream::new(seed);
        (0..n).map(|_| sd * s.normal()).collect()
    }

    #[test]
    fn exact_normals_pass() {
        let xs = normals(3, 2000, 2.0);
        let reps = gaussianity_suite(&xs, &GaussianityOptions::new(0.0, 4.0)).unwrap();
        assert!(reps.iter().all(|r| r.passed), "{reps:?}");
    }

    #[test]
    fn constant_samples() {
        let xs = vec![1.5; 300];
        let reps = gaussianity_suite(&xs, &GaussianityOptions::new(1.5, 1.0)).unwrap();
        assert!(reps[0].passed);
        assert!(!reps[1].passed);
        assert!(!reps[2].passed);
        assert!(!reps[3].passed);
        let off = gaussianity_suite(&xs, &GaussianityOptions::new(0.0, 1.0)).unwrap();
        assert!(!off[0].passed);
    }

    #[test]
    fn uniform_samples_fail_kurtosis() {
        let mut s = Stream::new(9);
        let xs: Vec<f64> = (0..5000).map(|_| (s.uniform() - 0.5) * 12f64.sqrt()).collect();
        let reps = gaussianity_suite(&xs, &GaussianityOptions::new(0.0, 1.0)).unwrap();
        assert!(reps[1].passed);
        assert!(!reps[2].passed);
    }

    #[test]
    fn complex_normals_pass_and_correlated_fail() {
        let re = normals(4, 2000, 1.0);
        let im = normals(5, 2000, 1.0);
        let z: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let reps = complex_gaussianity_suite(&z, &GaussianityOptions::new(0.0, 1.0)).unwrap();
        assert!(reps.iter().all(|r| r.passed), "{reps:?}");
        let w: Vec<Complex64> = re.iter().map(|&a| Complex64::new(a, a)).collect();
        let reps = complex_gaussianity_suite(&w, &GaussianityOptions::new(0.0, 1.0)).unwrap();
        assert!(reps.iter().any(|r| r.name.contains("covariance") && !r.passed));
        assert!(reps.iter().any(|r| r.name.contains("Z^2") && !r.passed));
    }

    #[test]
    fn too_few_samples() {
        assert!(gaussianity_suite(&normals(1, 100, 1.0), &GaussianityOptions::new(0.0, 1.0)).is_err());
    }
}
