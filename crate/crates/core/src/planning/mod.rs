//! Two-stress accelerated life test planning when field units carry a gamma
//! frailty: Fisher information, delta-method variances and plan search.

mod criteria;
mod info;
mod optimize;

pub use criteria::{criterion_gradient, field_failure_prob, field_quantile, Criterion};
pub use info::{plan_fisher_info, sev_unit_info, standardize_stress, PlanInformation};
pub use optimize::{asymptotic_sd, contour_grid, optimize_plan, ContourGrid, OptimalPlan};

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};

/// Planning values: stress-life line `v0 + v1 xi` for the SEV location,
/// SEV scale `sigma = 1 / beta`, and the gamma frailty `(mu, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanningValues {
    pub v0: f64,
    pub v1: f64,
    pub sigma: f64,
    pub mu: f64,
    pub k: f64,
}

impl PlanningValues {
    pub fn new(v0: f64, v1: f64, sigma: f64, mu: f64, k: f64) -> Result<Self> {
        if !(v0.is_finite() && v1.is_finite()) {
            return Err(Error::Domain("stress-life coefficients must be finite".into()));
        }
        Ok(Self { v0, v1, sigma: positive("sigma", sigma)?, mu: positive("mu", mu)?, k: positive("k", k)? })
    }
}

/// Lower stress `xi_l` and the fraction `pi` of units tested there; the
/// remaining units run at the highest stress `xi = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestPlan {
    pub xi_l: f64,
    pub pi: f64,
}

impl TestPlan {
    pub fn new(xi_l: f64, pi: f64) -> Result<Self> {
        if !(xi_l > 0.0 && xi_l < 1.0) {
            return Err(Error::Domain(format!("xi_L = {xi_l} must lie in (0, 1)")));
        }
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Error::Domain(format!("pi = {pi} must lie in (0, 1)")));
        }
        Ok(Self { xi_l, pi })
    }
}

/// Censoring applied at both stresses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanCensoring {
    TypeI { censor_time: f64 },
    TypeII { fail_fraction: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConstraint {
    pub censoring: PlanCensoring,
    /// Total units; `None` gives per-unit information.
    pub n_total: Option<usize>,
}

impl PlanConstraint {
    pub fn type_i(censor_time: f64) -> Result<Self> {
        Ok(Self { censoring: PlanCensoring::TypeI { censor_time: positive("censor_time", censor_time)? }, n_total: None })
    }

    pub fn type_ii(fail_fraction: f64) -> Result<Self> {
        if !(fail_fraction > 0.0 && fail_fraction < 1.0) {
            return Err(Error::Domain(format!("fail fraction {fail_fraction} must lie in (0, 1)")));
        }
        Ok(Self { censoring: PlanCensoring::TypeII { fail_fraction }, n_total: None })
    }

    pub fn with_units(mut self, n_total: usize) -> Self {
        self.n_total = Some(n_total);
        self
    }

    pub(crate) fn units(&self) -> f64 {
        self.n_total.map_or(1.0, |n| n as f64)
    }

    pub fn convention(&self) -> String {
        match self.n_total {
            None => "per-unit information (n_total = 1)".into(),
            Some(n) => format!("total information for n_total = {n}"),
        }
    }
}
