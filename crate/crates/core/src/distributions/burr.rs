use serde::{Deserialize, Serialize};

use super::{log_power_prefactor, softplus, Lifetime};
use crate::error::{positive, probability, Result};

/// Burr-XII law, `G(t) = 1 - [(t/lambda)^beta + 1]^(-k)`.
///
/// `k = 1` is the log-logistic distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurrXIIParams {
    pub lambda: f64,
    pub beta: f64,
    pub k: f64,
}

impl BurrXIIParams {
    pub fn new(lambda: f64, beta: f64, k: f64) -> Result<Self> {
        Ok(Self {
            lambda: positive("lambda", lambda)?,
            beta: positive("beta", beta)?,
            k: positive("k", k)?,
        })
    }

    pub fn log_logistic(lambda: f64, beta: f64) -> Result<Self> {
        Self::new(lambda, beta, 1.0)
    }

    /// `lambda [(1-p)^(-1/k) - 1]^(1/beta)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        let p = probability(p)?;
        let e = -(-p).ln_1p();
        Ok(self.lambda * (e / self.k).exp_m1().powf(1.0 / self.beta))
    }

    /// `ln[1 + (t/lambda)^beta]`.
    #[inline]
    pub(crate) fn log1p_power(&self, t: f64) -> f64 {
        if t == 0.0 {
            0.0
        } else {
            softplus(self.beta * (t / self.lambda).ln())
        }
    }
}

impl Lifetime for BurrXIIParams {
    fn log_survival(&self, t: f64) -> f64 {
        -self.k * self.log1p_power(t)
    }

    fn log_pdf(&self, t: f64) -> f64 {
        self.k.ln() + log_power_prefactor(t, self.lambda, self.beta)
            - (self.k + 1.0) * self.log1p_power(t)
    }

    fn hazard(&self, t: f64) -> f64 {
        (self.k.ln() + log_power_prefactor(t, self.lambda, self.beta) - self.log1p_power(t)).exp()
    }
}
