//! Monte-Carlo test of a common Weibull shape for lab and field data, based
//! on the pivotal ratio of the two shape estimates.

mod design;
mod reference;
mod study;

pub use design::{CensoringScheme, DesignKind, SchemeKind, SideDesign};
pub use reference::{shape_ratio, simulate_ratio_distribution, Method, ReferenceSample};
pub use study::{simulation_study, Scenario, StudyCell, StudyConfig, StudyTable};

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::stats::quantile_sorted;
use crate::FORMAT_VERSION;

/// Reported probabilities of the reference quantiles.
pub const REPORTED_QUANTILES: [f64; 7] = [0.005, 0.025, 0.05, 0.5, 0.95, 0.975, 0.995];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PivotalTestResult {
    pub format_version: u32,
    pub ratio_observed: f64,
    pub p_value: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub k_used: f64,
    /// `(probability, quantile)` pairs of the reference distribution.
    pub quantiles: Vec<(f64, f64)>,
    pub seed: u64,
    pub method: Method,
    pub lab_design: SideDesign,
    pub field_design: SideDesign,
    pub resampled: usize,
    pub truncated: usize,
    pub warnings: Vec<String>,
}

/// Two-sided Monte-Carlo p-value `2 min(F, 1 - F)` of `x` against the sorted
/// reference sample, with ties counted as half.
pub fn two_sided_p_value(sorted: &[f64], x: f64) -> f64 {
    let below = sorted.partition_point(|&d| d < x);
    let at_or_below = sorted.partition_point(|&d| d <= x);
    let f = (below as f64 + 0.5 * (at_or_below - below) as f64) / sorted.len() as f64;
    (2.0 * f.min(1.0 - f)).min(1.0)
}

/// Tests `beta_L = beta_W` given the lab and field shape estimates.
#[allow(clippy::too_many_arguments)]
pub fn pivotal_test(
    beta_l_hat: f64,
    beta_w_hat: f64,
    lab: SideDesign,
    field: SideDesign,
    k_hat: f64,
    b: usize,
    seed: u64,
    method: Method,
) -> Result<PivotalTestResult> {
    positive("beta_L_hat", beta_l_hat)?;
    positive("beta_W_hat", beta_w_hat)?;
    if b < 1000 {
        return Err(Error::Usage(format!("B = {b} is too small; use at least 1000")));
    }
    let reference = simulate_ratio_distribution(lab, field, k_hat, b, seed, method)?;
    let sorted = reference.sorted();
    let ratio = beta_l_hat / beta_w_hat;
    let mut warnings = Vec::new();
    if reference.resampled as f64 > 0.01 * b as f64 {
        warnings.push(format!("{} of {b} replicates needed redrawing", reference.resampled));
    }
    if reference.truncated > 0 {
        warnings.push(format!("{} nonpositive normal draws redrawn", reference.truncated));
    }
    Ok(PivotalTestResult {
        format_version: FORMAT_VERSION,
        ratio_observed: ratio,
        p_value: two_sided_p_value(&sorted, ratio),
        b,
        k_used: k_hat,
        quantiles: REPORTED_QUANTILES.iter().map(|&q| (q, quantile_sorted(&sorted, q))).collect(),
        seed,
        method,
        lab_design: lab,
        field_design: field,
        resampled: reference.resampled,
        truncated: reference.truncated,
        warnings,
    })
}
