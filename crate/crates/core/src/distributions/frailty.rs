use serde::{Deserialize, Serialize};

use super::{log_power_prefactor, softplus, BurrXIIParams, Lifetime, WeibullParams};
use crate::error::{nonnegative, positive, Error, Result};

/// Three-parameter gamma frailty: density
/// `mu^k (z - gamma)^(k-1) exp[-mu (z - gamma)] / Gamma(k)` on `z > gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaFrailtyParams {
    pub k: f64,
    pub mu: f64,
    pub gamma: f64,
}

impl GammaFrailtyParams {
    pub fn new(k: f64, mu: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            k: positive("k", k)?,
            mu: positive("mu", mu)?,
            gamma: nonnegative("gamma", gamma)?,
        })
    }

    pub fn mean(&self) -> f64 {
        self.gamma + self.k / self.mu
    }

    pub fn variance(&self) -> f64 {
        self.k / (self.mu * self.mu)
    }
}

/// Marginal law of a field lifetime whose conditional hazard is `Z` times a
/// Weibull(`alpha`, `beta`) hazard, with `Z` gamma-distributed.
///
/// Survival is `[(t/alpha)^beta / mu + 1]^(-k) exp[-gamma (t/alpha)^beta]`;
/// at `gamma = 0` this is Burr-XII with `lambda = alpha mu^(1/beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrailtyFieldParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub k: f64,
    pub gamma: f64,
}

impl FrailtyFieldParams {
    pub fn new(alpha: f64, beta: f64, mu: f64, k: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            alpha: positive("alpha", alpha)?,
            beta: positive("beta", beta)?,
            mu: positive("mu", mu)?,
            k: positive("k", k)?,
            gamma: nonnegative("gamma", gamma)?,
        })
    }

    pub fn from_parts(baseline: WeibullParams, frailty: GammaFrailtyParams) -> Result<Self> {
        Self::new(baseline.alpha, baseline.beta, frailty.mu, frailty.k, frailty.gamma)
    }

    pub fn baseline(&self) -> WeibullParams {
        WeibullParams { alpha: self.alpha, beta: self.beta }
    }

    pub fn frailty(&self) -> GammaFrailtyParams {
        GammaFrailtyParams { k: self.k, mu: self.mu, gamma: self.gamma }
    }

    /// `alpha mu^(1/beta)`.
    pub fn burr_scale(&self) -> f64 {
        self.alpha * self.mu.powf(1.0 / self.beta)
    }

    /// The Burr-XII form, available only without a threshold.
    pub fn to_burr(&self) -> Option<BurrXIIParams> {
        (self.gamma == 0.0).then(|| BurrXIIParams {
            lambda: self.burr_scale(),
            beta: self.beta,
            k: self.k,
        })
    }

    /// `(w, ln[1 + w/mu])` with `w = (t/alpha)^beta`.
    #[inline]
    fn terms(&self, t: f64) -> (f64, f64) {
        if t == 0.0 {
            return (0.0, 0.0);
        }
        let log_w = self.beta * (t / self.alpha).ln();
        (log_w.exp(), softplus(log_w - self.mu.ln()))
    }

    /// Numerical inverse of the cdf by bisection in `ln t`, to absolute
    /// tolerance `1e-12` in probability.
    pub(crate) fn quantile_numeric(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain(format!("probability must lie in [0, 1), got {p}")));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        let target = (-p).ln_1p();
        let f = |s: f64| self.log_survival(s.exp()) - target;
        let (mut lo, mut hi) = (self.alpha.ln() - 1.0, self.alpha.ln() + 1.0);
        let mut steps = 0;
        while f(lo) < 0.0 {
            lo -= 2.0 * (1 + steps) as f64;
            steps += 1;
            if steps > 200 {
                return Err(Error::Numerical("quantile bracket search failed".into()));
            }
        }
        while f(hi) > 0.0 {
            hi += 2.0 * (1 + steps) as f64;
            steps += 1;
            if steps > 400 {
                return Err(Error::Numerical("quantile bracket search failed".into()));
            }
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = f(mid);
            if v > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (self.cdf(hi.exp()) - self.cdf(lo.exp())).abs() < 1e-13 {
                break;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }
}

impl Lifetime for FrailtyFieldParams {
    fn log_survival(&self, t: f64) -> f64 {
        let (w, l1p) = self.terms(t);
        -self.k * l1p - self.gamma * w
    }

    fn log_pdf(&self, t: f64) -> f64 {
        let (w, l1p) = self.terms(t);
        log_power_prefactor(t, self.alpha, self.beta) - self.k * l1p
            + (self.gamma + self.k / (w + self.mu)).ln()
            - self.gamma * w
    }

    fn hazard(&self, t: f64) -> f64 {
        let (w, _) = self.terms(t);
        log_power_prefactor(t, self.alpha, self.beta).exp() * (self.gamma + self.k / (w + self.mu))
    }
}
