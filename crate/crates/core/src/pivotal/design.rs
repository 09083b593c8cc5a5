use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{CensoredSample, Censoring};

/// Censoring kind used to generate data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeKind {
    Complete,
    TypeII { r: usize },
    TypeI { tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensoringScheme {
    pub n: usize,
    pub kind: SchemeKind,
}

impl CensoringScheme {
    pub fn new(n: usize, kind: SchemeKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("scheme needs at least one unit".into()));
        }
        match kind {
            SchemeKind::TypeII { r } if r == 0 || r > n => {
                Err(Error::Validation(format!("Type II stop r={r} outside 1..={n}")))
            }
            SchemeKind::TypeI { tau } if !(tau > 0.0 && tau.is_finite()) => {
                Err(Error::Validation(format!("Type I censor time {tau} must be positive")))
            }
            _ => Ok(Self { n, kind }),
        }
    }

    pub fn censoring(&self) -> Censoring {
        match self.kind {
            SchemeKind::Complete => Censoring::Complete,
            SchemeKind::TypeII { r } => Censoring::TypeII { failures: r },
            SchemeKind::TypeI { tau } => Censoring::TypeI { censor_time: tau },
        }
    }
}

/// How one side of the reference simulation is censored, in units where the
/// distribution parameters are 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DesignKind {
    Complete,
    TypeII { r: usize },
    /// Type I censoring at the time whose failure probability is `fraction`.
    TypeI { fraction: f64 },
}

/// One side (lab or field) of the reference simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideDesign {
    pub n: usize,
    pub kind: DesignKind,
}

impl SideDesign {
    pub fn new(n: usize, kind: DesignKind) -> Result<Self> {
        let ok = n > 0
            && match kind {
                DesignKind::Complete => true,
                DesignKind::TypeII { r } => r >= 1 && r <= n,
                DesignKind::TypeI { fraction } => fraction > 0.0 && fraction <= 1.0,
            };
        if ok {
            Ok(Self { n, kind })
        } else {
            Err(Error::Validation(format!("invalid simulation design {kind:?} with n={n}")))
        }
    }

    /// Matches an observed dataset: same size, same failure count under
    /// Type II, same expected failure count under Type I.
    pub fn from_sample(sample: &CensoredSample) -> Result<Self> {
        let n = sample.len();
        let kind = match sample.scheme() {
            Censoring::Complete => DesignKind::Complete,
            Censoring::TypeII { failures } => DesignKind::TypeII { r: failures },
            Censoring::TypeI { .. } | Censoring::Arbitrary => {
                if sample.n_censored() == 0 {
                    DesignKind::Complete
                } else {
                    DesignKind::TypeI { fraction: sample.n_events() as f64 / n as f64 }
                }
            }
        };
        Self::new(n, kind)
    }

    /// Design for a generating scheme given the number of failures actually
    /// observed (only used for Type I).
    pub fn from_scheme(scheme: CensoringScheme, events: usize) -> Result<Self> {
        let kind = match scheme.kind {
            SchemeKind::Complete => DesignKind::Complete,
            SchemeKind::TypeII { r } => DesignKind::TypeII { r },
            SchemeKind::TypeI { .. } => DesignKind::TypeI { fraction: events as f64 / scheme.n as f64 },
        };
        Self::new(scheme.n, kind)
    }

    /// Failures are needed on this side for the shape to be estimable.
    pub(crate) fn expected_failures(&self) -> f64 {
        match self.kind {
            DesignKind::Complete => self.n as f64,
            DesignKind::TypeII { r } => r as f64,
            DesignKind::TypeI { fraction } => fraction * self.n as f64,
        }
    }
}
