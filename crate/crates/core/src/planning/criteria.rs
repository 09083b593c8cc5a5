use serde::{Deserialize, Serialize};

use super::PlanningValues;
use crate::error::{positive, probability, Error, Result};

/// Quantity whose estimator variance the plan minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "criterion", rename_all = "snake_case")]
pub enum Criterion {
    /// `ln t_p` of the field distribution.
    LogQuantile { p: f64 },
    /// `t_p` of the field distribution.
    Quantile { p: f64 },
    /// Probability of failure before `tau` in the field.
    FailureProb { tau: f64 },
    /// `ln t_p` of the Weibull distribution at use conditions, ignoring the
    /// frailty (homogeneous field).
    WeibullLogQuantile { p: f64 },
}

/// `mu [(1 - p)^(-1/k) - 1]`
fn frailty_term(values: &PlanningValues, p: f64) -> f64 {
    values.mu * (-(-p).ln_1p() / values.k).exp_m1()
}

/// Field `p`-quantile `exp(v0 + v1) [mu (1-p)^(-1/k) - mu]^sigma`.
pub fn field_quantile(values: &PlanningValues, p: f64) -> Result<f64> {
    let p = probability(p)?;
    if p == 0.0 {
        return Err(Error::Domain("quantile level must be in (0, 1)".into()));
    }
    Ok((values.v0 + values.v1 + values.sigma * frailty_term(values, p).ln()).exp())
}

/// Field failure probability by time `tau`, `1 - [Omega^(1/sigma)/mu + 1]^(-k)`
/// with `Omega = tau exp[-(v0 + v1)]`.
pub fn field_failure_prob(values: &PlanningValues, tau: f64) -> Result<f64> {
    positive("tau", tau)?;
    let w = scaled_exposure(values, tau);
    Ok(-(-values.k * w.ln_1p()).exp_m1())
}

/// `Omega^(1/sigma) / mu`
fn scaled_exposure(values: &PlanningValues, tau: f64) -> f64 {
    ((tau.ln() - values.v0 - values.v1) / values.sigma - values.mu.ln()).exp()
}

/// Gradient of the criterion with respect to `(v0, v1, sigma)`.
pub fn criterion_gradient(values: &PlanningValues, criterion: Criterion) -> Result<[f64; 3]> {
    Ok(match criterion {
        Criterion::LogQuantile { p } => {
            field_quantile(values, p)?;
            [1.0, 1.0, frailty_term(values, p).ln()]
        }
        Criterion::Quantile { p } => {
            let tp = field_quantile(values, p)?;
            [tp, tp, tp * frailty_term(values, p).ln()]
        }
        Criterion::FailureProb { tau } => {
            positive("tau", tau)?;
            let w = scaled_exposure(values, tau);
            let dp_dw = values.k * (-(values.k + 1.0) * w.ln_1p()).exp();
            let d = -dp_dw * w / values.sigma;
            let zeta = (tau.ln() - values.v0 - values.v1) / values.sigma;
            [d, d, -dp_dw * w * zeta / values.sigma]
        }
        Criterion::WeibullLogQuantile { p } => {
            let p = probability(p)?;
            if p == 0.0 {
                return Err(Error::Domain("quantile level must be in (0, 1)".into()));
            }
            [1.0, 1.0, (-(-p).ln_1p()).ln()]
        }
    })
}
