use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::design::{DesignKind, SideDesign};
use crate::error::{positive, Error, Result};
use crate::inference::{burr_fixed_k_newton, weibull_shape_mle, CensoredSample, Prepared};
use crate::rng::task_rng;

/// How the field-side shape estimate is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// Simulate Burr-XII(1, 1, k) field data and refit it with `k` fixed.
    FullRefit,
    /// Draw the field shape ratio from its large-sample normal law.
    NormalApprox { beta_w_hat: f64, beta_w_se: f64 },
}

impl Method {
    /// Full refit for field samples up to 5000 units, normal approximation
    /// above that.
    pub fn auto(field_n: usize, beta_w_hat: f64, beta_w_se: f64) -> Self {
        if field_n <= 5000 || !(beta_w_se > 0.0 && beta_w_se.is_finite()) {
            Method::FullRefit
        } else {
            Method::NormalApprox { beta_w_hat, beta_w_se }
        }
    }
}

/// Simulated reference distribution of the shape ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSample {
    pub draws: Vec<f64>,
    /// Replicates redrawn because a refit failed.
    pub resampled: usize,
    /// Normal-approximation draws at or below zero that were redrawn.
    pub truncated: usize,
}

impl ReferenceSample {
    pub fn sorted(&self) -> Vec<f64> {
        let mut d = self.draws.clone();
        d.sort_by(f64::total_cmp);
        d
    }
}

const MAX_RETRIES: usize = 1000;

/// Draws `B` replicates of the lab/field shape-ratio estimator under unit
/// parameters (Weibull(1, 1) lab, Burr-XII(1, 1, k) field).
///
/// Replicate `i` uses its own stream of `seed`, so the output does not depend
/// on the rayon pool size.
pub fn simulate_ratio_distribution(
    lab: SideDesign,
    field: SideDesign,
    k: f64,
    b: usize,
    seed: u64,
    method: Method,
) -> Result<ReferenceSample> {
    positive("k", k)?;
    if b == 0 {
        return Err(Error::Usage("B must be at least 1".into()));
    }
    if lab.expected_failures() < 2.0 {
        return Err(Error::InsufficientData { needed: 2, got: lab.expected_failures() as usize });
    }
    let normal = match method {
        Method::FullRefit => {
            if field.expected_failures() < 2.0 {
                return Err(Error::InsufficientData { needed: 2, got: field.expected_failures() as usize });
            }
            None
        }
        Method::NormalApprox { beta_w_hat, beta_w_se } => {
            positive("beta_w_hat", beta_w_hat)?;
            positive("beta_w_se", beta_w_se)?;
            Some(Normal::new(1.0, beta_w_se / beta_w_hat).map_err(|e| Error::Numerical(e.to_string()))?)
        }
    };
    let results: Vec<(f64, usize, usize)> = (0..b)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let (mut resampled, mut truncated) = (0, 0);
            for _ in 0..MAX_RETRIES {
                let Some(bl) = weibull_shape_mle(&unit_lab(&mut rng, lab)) else {
                    resampled += 1;
                    continue;
                };
                let bw = match &normal {
                    None => match burr_fixed_k_newton(&unit_field(&mut rng, field, k), k) {
                        Some((_, bw)) => bw,
                        None => {
                            resampled += 1;
                            continue;
                        }
                    },
                    Some(nd) => loop {
                        let x = nd.sample(&mut rng);
                        if x > 0.0 {
                            break x;
                        }
                        truncated += 1;
                    },
                };
                return (bl / bw, resampled, truncated);
            }
            (f64::NAN, resampled, truncated)
        })
        .collect();
    if results.iter().any(|r| r.0.is_nan()) {
        return Err(Error::Numerical("reference replicate failed repeatedly".into()));
    }
    Ok(ReferenceSample {
        draws: results.iter().map(|r| r.0).collect(),
        resampled: results.iter().map(|r| r.1).sum(),
        truncated: results.iter().map(|r| r.2).sum(),
    })
}

/// Sorted standard-exponential order statistics observed under `design`,
/// generated from normalized spacings; returns the failures, the censoring
/// point and the number censored.
fn exponential_order_stats<R: Rng + ?Sized>(rng: &mut R, design: SideDesign) -> (Vec<f64>, f64, usize) {
    let n = design.n;
    let (limit, stop) = match design.kind {
        DesignKind::Complete => (n, f64::INFINITY),
        DesignKind::TypeII { r } => (r, f64::INFINITY),
        DesignKind::TypeI { fraction } => (n, -(-fraction).ln_1p()),
    };
    let mut out = Vec::with_capacity(limit.min(n));
    let mut e = 0.0;
    for i in 0..limit {
        let z: f64 = Exp1.sample(rng);
        let next = e + z / (n - i) as f64;
        if next > stop {
            break;
        }
        e = next;
        out.push(e);
    }
    let censor_at = match design.kind {
        DesignKind::TypeI { .. } => stop,
        _ => e,
    };
    let cens = n - out.len();
    (out, censor_at, cens)
}

pub(crate) fn unit_lab<R: Rng + ?Sized>(rng: &mut R, design: SideDesign) -> Prepared {
    let (fails, c, m) = exponential_order_stats(rng, design);
    Prepared::from_parts(fails.iter().map(|e| e.ln()).collect(), c.ln(), m)
}

pub(crate) fn unit_field<R: Rng + ?Sized>(rng: &mut R, design: SideDesign, k: f64) -> Prepared {
    let (fails, c, m) = exponential_order_stats(rng, design);
    let ln_t = |e: f64| (e / k).exp_m1().ln();
    Prepared::from_parts(fails.iter().map(|&e| ln_t(e)).collect(), ln_t(c), m)
}

/// Shape-ratio estimate `beta_L / beta_W` from a lab sample (Weibull fit) and
/// a field sample (Burr-XII fit with `k` fixed), using the same estimators as
/// the reference simulation.
pub fn shape_ratio(lab: &CensoredSample, field: &CensoredSample, k: f64) -> Option<f64> {
    let bl = weibull_shape_mle(&lab.prepared())?;
    let (_, bw) = burr_fixed_k_newton(&field.prepared(), k)?;
    Some(bl / bw)
}
