use serde::{Deserialize, Serialize};

use super::fit::FitResult;
use crate::error::{Error, Result};
use crate::stats::chi_square_sf;

/// Likelihood-ratio test outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrTestResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
}

/// `-2 (l_reduced - l_full)` against chi-square(df).
///
/// Small negative statistics from optimizer noise are floored at zero.
pub fn lr_test(full: &FitResult, reduced: &FitResult, df: u32) -> Result<LrTestResult> {
    lr_test_loglik(full.loglik, reduced.loglik, df)
}

pub fn lr_test_loglik(full: f64, reduced: f64, df: u32) -> Result<LrTestResult> {
    if df == 0 {
        return Err(Error::Usage("likelihood-ratio test needs df >= 1".into()));
    }
    if !(full.is_finite() && reduced.is_finite()) {
        return Err(Error::Numerical("non-finite log-likelihood in LR test".into()));
    }
    let statistic = (2.0 * (full - reduced)).max(0.0);
    Ok(LrTestResult { statistic, df, p_value: chi_square_sf(statistic, df as f64) })
}

/// LR test of a single parameter on the boundary of its space: the null
/// distribution is the 50:50 mixture of a point mass at zero and chi-square(1).
pub fn lr_test_boundary(full: &FitResult, reduced: &FitResult) -> Result<LrTestResult> {
    let mut r = lr_test(full, reduced, 1)?;
    r.p_value = if r.statistic > 0.0 { 0.5 * r.p_value } else { 1.0 };
    Ok(r)
}

pub fn aic(fit: &FitResult) -> f64 {
    aic_from(fit.loglik, fit.n_params())
}

pub fn aic_from(loglik: f64, n_params: usize) -> f64 {
    2.0 * n_params as f64 - 2.0 * loglik
}
