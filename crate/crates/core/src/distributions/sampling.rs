use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use super::{BurrXIIParams, FrailtyFieldParams, GammaFrailtyParams, WeibullParams};
use crate::error::{Error, Result};
use crate::rng::task_rng;

/// Any of the distributions that can be sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LifetimeDistribution {
    Weibull(WeibullParams),
    BurrXii(BurrXIIParams),
    GammaFrailty(GammaFrailtyParams),
    FrailtyField(FrailtyFieldParams),
}

impl LifetimeDistribution {
    fn validated(self) -> Result<Self> {
        Ok(match self {
            Self::Weibull(p) => Self::Weibull(WeibullParams::new(p.alpha, p.beta)?),
            Self::BurrXii(p) => Self::BurrXii(BurrXIIParams::new(p.lambda, p.beta, p.k)?),
            Self::GammaFrailty(p) => Self::GammaFrailty(GammaFrailtyParams::new(p.k, p.mu, p.gamma)?),
            Self::FrailtyField(p) => {
                Self::FrailtyField(FrailtyFieldParams::new(p.alpha, p.beta, p.mu, p.k, p.gamma)?)
            }
        })
    }

    /// Draws `n` values from an existing generator.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<Vec<f64>> {
        let dist = self.validated()?;
        let mut out = Vec::with_capacity(n);
        match dist {
            Self::Weibull(p) => out.extend((0..n).map(|_| weibull_draw(rng, &p))),
            Self::BurrXii(p) => out.extend((0..n).map(|_| burr_draw(rng, &p))),
            Self::GammaFrailty(p) => {
                let g = gamma_law(&p)?;
                out.extend((0..n).map(|_| p.gamma + g.sample(rng)));
            }
            Self::FrailtyField(p) => {
                let frailty = p.frailty();
                let g = gamma_law(&frailty)?;
                out.extend((0..n).map(|_| {
                    let z = frailty.gamma + g.sample(rng);
                    conditional_draw(rng, &p.baseline(), z)
                }));
            }
        }
        Ok(out)
    }
}

fn gamma_law(p: &GammaFrailtyParams) -> Result<Gamma<f64>> {
    Gamma::new(p.k, 1.0 / p.mu).map_err(|e| Error::Numerical(format!("gamma law: {e}")))
}

/// Inverse-cdf draw `alpha E^(1/beta)`, `E ~ Exp(1)`.
#[inline]
pub(crate) fn weibull_draw<R: Rng + ?Sized>(rng: &mut R, p: &WeibullParams) -> f64 {
    let e: f64 = Exp1.sample(rng);
    p.alpha * e.powf(1.0 / p.beta)
}

/// Inverse-cdf draw `lambda [exp(E/k) - 1]^(1/beta)`, `E ~ Exp(1)`.
#[inline]
pub(crate) fn burr_draw<R: Rng + ?Sized>(rng: &mut R, p: &BurrXIIParams) -> f64 {
    let e: f64 = Exp1.sample(rng);
    p.lambda * (e / p.k).exp_m1().powf(1.0 / p.beta)
}

/// Lifetime with conditional survival `exp[-z (t/alpha)^beta]`.
#[inline]
fn conditional_draw<R: Rng + ?Sized>(rng: &mut R, p: &WeibullParams, z: f64) -> f64 {
    let e: f64 = Exp1.sample(rng);
    p.alpha * (e / z).powf(1.0 / p.beta)
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("sample size must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Draws `n` values from `dist`, deterministically in `seed`.
pub fn sample(dist: LifetimeDistribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    check_count(n)?;
    dist.sample_with(&mut task_rng(seed, 0), n)
}

/// Field lifetimes from the frailty model: one gamma frailty `Z` per unit,
/// then `t = alpha (E/Z)^(1/beta)`.
pub fn sample_field_time(
    weibull: WeibullParams,
    frailty: GammaFrailtyParams,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    check_count(n)?;
    let p = FrailtyFieldParams::from_parts(weibull, frailty)?;
    LifetimeDistribution::FrailtyField(p).sample_with(&mut task_rng(seed, 0), n)
}
