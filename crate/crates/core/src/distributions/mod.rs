//! Lifetime distributions: Weibull (lab), Burr-XII / log-logistic (field,
//! no threshold), the three-parameter gamma frailty and the frailty-marginal
//! field distribution.
//!
//! Everything is evaluated through log-survival and log-density so that large
//! values of `(t/scale)^shape` never overflow.

mod burr;
mod frailty;
pub(crate) mod sampling;
mod weibull;

pub use burr::BurrXIIParams;
pub use frailty::{FrailtyFieldParams, GammaFrailtyParams};
pub use sampling::{sample, sample_field_time, LifetimeDistribution};
pub use weibull::WeibullParams;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which function of a distribution to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Cdf,
    Pdf,
    Hazard,
    Quantile,
}

/// Common interface of the continuous lifetime laws on `[0, inf)`.
pub trait Lifetime {
    /// `ln S(t)`; `t` must be nonnegative.
    fn log_survival(&self, t: f64) -> f64;
    /// `ln f(t)`; may be `+inf` at `t = 0` for decreasing-hazard shapes.
    fn log_pdf(&self, t: f64) -> f64;
    fn hazard(&self, t: f64) -> f64;

    fn survival(&self, t: f64) -> f64 {
        self.log_survival(t).exp()
    }

    fn cdf(&self, t: f64) -> f64 {
        -self.log_survival(t).exp_m1()
    }

    fn pdf(&self, t: f64) -> f64 {
        self.log_pdf(t).exp()
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp()
    } else if x < -35.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

/// `(t/scale)^shape` and its logarithm; `t = 0` maps to `(0, -inf)`.
#[inline]
pub(crate) fn scaled_power(t: f64, scale: f64, shape: f64) -> (f64, f64) {
    if t == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let log_w = shape * (t / scale).ln();
    (log_w.exp(), log_w)
}

/// Density-type prefactor `(shape/scale) (t/scale)^(shape-1)` in log form,
/// with the `t = 0` conventions: `+inf` for `shape < 1`, `shape/scale` for
/// `shape = 1`, zero (`-inf` in log) for `shape > 1`.
#[inline]
pub(crate) fn log_power_prefactor(t: f64, scale: f64, shape: f64) -> f64 {
    if t == 0.0 {
        return match shape.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => (shape / scale).ln(),
            _ => f64::NEG_INFINITY,
        };
    }
    (shape / scale).ln() + (shape - 1.0) * (t / scale).ln()
}

pub(crate) fn check_time(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        Err(Error::Domain(format!("time must be >= 0, got {t}")))
    } else {
        Ok(t)
    }
}

/// Evaluates a Weibull cdf, pdf, hazard or quantile (`t` is then a probability).
pub fn weibull_eval(params: WeibullParams, t: f64, which: Which) -> Result<f64> {
    let d = WeibullParams::new(params.alpha, params.beta)?;
    match which {
        Which::Quantile => d.quantile(t),
        _ => eval_lifetime(&d, t, which),
    }
}

/// Evaluates a Burr-XII cdf, pdf, hazard or quantile (`t` is then a probability).
pub fn burr12_eval(params: BurrXIIParams, t: f64, which: Which) -> Result<f64> {
    let d = BurrXIIParams::new(params.lambda, params.beta, params.k)?;
    match which {
        Which::Quantile => d.quantile(t),
        _ => eval_lifetime(&d, t, which),
    }
}

/// Evaluates the frailty-marginal field cdf, pdf or hazard.
pub fn frailty_marginal_eval(params: FrailtyFieldParams, t: f64, which: Which) -> Result<f64> {
    let d = FrailtyFieldParams::new(params.alpha, params.beta, params.mu, params.k, params.gamma)?;
    match which {
        Which::Quantile => Err(Error::Domain(
            "the frailty-marginal quantile is not exposed; use the Burr-XII form when gamma = 0"
                .into(),
        )),
        _ => eval_lifetime(&d, t, which),
    }
}

fn eval_lifetime<D: Lifetime>(d: &D, t: f64, which: Which) -> Result<f64> {
    let t = check_time(t)?;
    Ok(match which {
        Which::Cdf => d.cdf(t),
        Which::Pdf => d.pdf(t),
        Which::Hazard => d.hazard(t),
        Which::Quantile => unreachable!("handled by caller"),
    })
}
