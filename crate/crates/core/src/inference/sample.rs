use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How observation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Censoring {
    Complete,
    /// Fixed end-of-test time; every censored unit is censored there.
    TypeI { censor_time: f64 },
    /// Test stops at the `failures`-th failure; survivors are censored there.
    TypeII { failures: usize },
    /// Unstructured right censoring (e.g. staggered field entry).
    Arbitrary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub time: f64,
    /// `true` for a failure, `false` for a right-censored unit.
    pub failed: bool,
}

impl Observation {
    pub fn failure(time: f64) -> Self {
        Self { time, failed: true }
    }

    pub fn censored(time: f64) -> Self {
        Self { time, failed: false }
    }
}

/// Right-censored lifetime data under a declared censoring scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensoredSample {
    observations: Vec<Observation>,
    scheme: Censoring,
}

impl CensoredSample {
    pub fn new(observations: Vec<Observation>, scheme: Censoring) -> Result<Self> {
        if let Some(o) = observations.iter().find(|o| !(o.time.is_finite() && o.time > 0.0)) {
            return Err(Error::Validation(format!("times must be positive and finite, got {}", o.time)));
        }
        let failures = observations.iter().filter(|o| o.failed).count();
        let mut censored = observations.iter().filter(|o| !o.failed).map(|o| o.time);
        match scheme {
            Censoring::Complete => {
                if failures != observations.len() {
                    return Err(Error::Validation("complete sample contains censored units".into()));
                }
            }
            Censoring::TypeI { censor_time } => {
                if !(censor_time.is_finite() && censor_time > 0.0) {
                    return Err(Error::Validation(format!("invalid censor time {censor_time}")));
                }
                if censored.any(|t| t != censor_time) {
                    return Err(Error::Validation(format!(
                        "Type I sample has censored times other than {censor_time}"
                    )));
                }
                if observations.iter().any(|o| o.failed && o.time > censor_time) {
                    return Err(Error::Validation("failure observed after the censor time".into()));
                }
            }
            Censoring::TypeII { failures: r } => {
                if r != failures || r == 0 {
                    return Err(Error::Validation(format!(
                        "Type II sample declares {r} failures but has {failures}"
                    )));
                }
                let last = observations
                    .iter()
                    .filter(|o| o.failed)
                    .map(|o| o.time)
                    .fold(0.0, f64::max);
                if censored.any(|t| t != last) {
                    return Err(Error::Validation(format!(
                        "Type II survivors must be censored at the last failure time {last}"
                    )));
                }
            }
            Censoring::Arbitrary => {}
        }
        if observations.is_empty() {
            return Err(Error::Validation("sample is empty".into()));
        }
        Ok(Self { observations, scheme })
    }

    /// Censors raw lifetimes according to `scheme`.
    pub fn from_lifetimes(mut times: Vec<f64>, scheme: Censoring) -> Result<Self> {
        let obs = match scheme {
            Censoring::Complete | Censoring::Arbitrary => {
                times.into_iter().map(Observation::failure).collect()
            }
            Censoring::TypeI { censor_time } => times
                .into_iter()
                .map(|t| {
                    if t <= censor_time {
                        Observation::failure(t)
                    } else {
                        Observation::censored(censor_time)
                    }
                })
                .collect(),
            Censoring::TypeII { failures: r } => {
                if r == 0 || r > times.len() {
                    return Err(Error::Validation(format!(
                        "cannot stop at failure {r} of {} units",
                        times.len()
                    )));
                }
                times.sort_by(f64::total_cmp);
                let last = times[r - 1];
                let n = times.len();
                let mut obs: Vec<Observation> = times.into_iter().take(r).map(Observation::failure).collect();
                obs.extend(std::iter::repeat_n(Observation::censored(last), n - r));
                obs
            }
        };
        Self::new(obs, scheme)
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn scheme(&self) -> Censoring {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn n_events(&self) -> usize {
        self.observations.iter().filter(|o| o.failed).count()
    }

    pub fn n_censored(&self) -> usize {
        self.len() - self.n_events()
    }

    pub fn max_time(&self) -> f64 {
        self.observations.iter().map(|o| o.time).fold(0.0, f64::max)
    }

    /// Every time multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let scheme = match self.scheme {
            Censoring::TypeI { censor_time } => Censoring::TypeI { censor_time: censor_time * c },
            s => s,
        };
        Self::new(
            self.observations
                .iter()
                .map(|o| Observation { time: o.time * c, failed: o.failed })
                .collect(),
            scheme,
        )
    }

    pub(crate) fn prepared(&self) -> Prepared {
        Prepared::new(&self.observations)
    }
}

/// Likelihood-ready view: failure log-times plus censored times grouped by
/// value, so heavily censored samples cost only as much as their failures.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub fail_logs: Vec<f64>,
    pub sum_fail_logs: f64,
    /// `(ln time, multiplicity)`
    pub censored: Vec<(f64, f64)>,
    pub n: usize,
}

impl Prepared {
    pub fn new(obs: &[Observation]) -> Self {
        let fail_logs: Vec<f64> = obs.iter().filter(|o| o.failed).map(|o| o.time.ln()).collect();
        let mut cens: Vec<f64> = obs.iter().filter(|o| !o.failed).map(|o| o.time).collect();
        cens.sort_by(f64::total_cmp);
        let mut censored: Vec<(f64, f64)> = Vec::new();
        let mut prev = f64::NAN;
        for t in cens {
            match censored.last_mut() {
                Some((_, c)) if t == prev => *c += 1.0,
                _ => censored.push((t.ln(), 1.0)),
            }
            prev = t;
        }
        Self {
            sum_fail_logs: fail_logs.iter().sum(),
            fail_logs,
            censored,
            n: obs.len(),
        }
    }

    pub fn events(&self) -> usize {
        self.fail_logs.len()
    }

    /// Failures at log-times `fail_logs` plus `n_cens` units censored at
    /// `ln_censor`; used by the simulation loops.
    pub fn from_parts(fail_logs: Vec<f64>, ln_censor: f64, n_cens: usize) -> Self {
        let n = fail_logs.len() + n_cens;
        Self {
            sum_fail_logs: fail_logs.iter().sum(),
            fail_logs,
            censored: if n_cens > 0 { vec![(ln_censor, n_cens as f64)] } else { vec![] },
            n,
        }
    }
}
