//! Least-squares and maximum-likelihood fitting.

mod lsq;
mod mle;
mod truncation;

pub use lsq::{
    linear_regression, log_binned_points, loglog_fit, loglog_fit_with, loglog_points, LinearFit,
    LsqFitResult, LsqOptions,
};
pub use mle::{
    fit_dlognormal_mle, fit_family, fit_hooked_mle, fit_power_law_mle, MleFitResult, ALPHA_MAX,
    MIN_SAMPLE, OFFSET_MAX,
};
pub use truncation::{fit_truncated, truncate, TruncationPolicy};

/// Which moments of a power law with exponent alpha exist. All three
/// thresholds are strict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentInterpretation {
    pub median_exists: bool,
    pub mean_finite: bool,
    pub variance_finite: bool,
}

pub fn exponent_interpretation(alpha: f64) -> ExponentInterpretation {
    ExponentInterpretation {
        median_exists: alpha > 1.0,
        mean_finite: alpha > 2.0,
        variance_finite: alpha > 3.0,
    }
}
