use serde::{Deserialize, Serialize};

use super::{log_power_prefactor, scaled_power, Lifetime};
use crate::error::{positive, probability, Result};

/// Two-parameter Weibull law, `F(x) = 1 - exp[-(x/alpha)^beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub alpha: f64,
    pub beta: f64,
}

impl WeibullParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            alpha: positive("alpha", alpha)?,
            beta: positive("beta", beta)?,
        })
    }

    /// Smallest-extreme-value location of `ln X`.
    pub fn sev_location(&self) -> f64 {
        self.alpha.ln()
    }

    /// Smallest-extreme-value scale of `ln X`.
    pub fn sev_scale(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn from_sev(location: f64, scale: f64) -> Result<Self> {
        Self::new(location.exp(), 1.0 / positive("sigma", scale)?)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        let p = probability(p)?;
        Ok(self.alpha * (-(-p).ln_1p()).powf(1.0 / self.beta))
    }
}

impl Lifetime for WeibullParams {
    fn log_survival(&self, t: f64) -> f64 {
        -scaled_power(t, self.alpha, self.beta).0
    }

    fn log_pdf(&self, t: f64) -> f64 {
        let (w, _) = scaled_power(t, self.alpha, self.beta);
        log_power_prefactor(t, self.alpha, self.beta) - w
    }

    fn hazard(&self, t: f64) -> f64 {
        log_power_prefactor(t, self.alpha, self.beta).exp()
    }
}
