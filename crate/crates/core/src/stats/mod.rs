//! Estimators and tests that turn samples into verdicts.

mod gaussianity;
mod independence;
mod ks;
mod moments;
mod quasilinear;
mod regularity;
mod report;
mod testfn;

pub use gaussianity::{
    complex_gaussianity_suite, default_kurtosis_threshold, gaussianity_suite, GaussianityOptions, VarianceTolerance,
    MIN_GAUSSIANITY_SAMPLES,
};
pub use independence::{independence_from_increments, independence_suite, IndependenceOptions, MIN_REPETITIONS};
pub use ks::{ks_distance_normal, ks_one_sample, ks_two_sample, ks_two_sample_distance, DEFAULT_KS_SLACK, KS_CRITICAL_5PCT};
pub use moments::{complex_mean, correlation, covariance, excess_kurtosis, mean, std_error, variance};
pub use quasilinear::{quasilinear_D, Coverage, DiffusionCoefficient};
pub use regularity::{dyadic_scales, holder_exponent, log_log_slope, modulus_of_continuity, modulus_profile, quadratic_variation, PathPoint};
pub use report::{Comparison, StatReport};
pub use testfn::{CubicPiece, TestFunction, TestFunctionKind};
