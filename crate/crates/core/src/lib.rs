//! Reliability toolkit linking accelerated-life-test (lab) failure data to
//! heterogeneous field failure data through a gamma frailty model.
//!
//! * [`distributions`] evaluates and samples Weibull, Burr-XII, gamma frailty
//!   and frailty-marginal field lifetimes.
//! * [`hazard`] classifies the shape of the field hazard.
//! * [`inference`] fits censored-data models by maximum likelihood, runs
//!   likelihood-ratio tests and Kaplan–Meier estimation.
//! * [`pivotal`] implements the Monte-Carlo shape-ratio test and the Type I
//!   error simulation study.
//! * [`planning`] builds optimal two-stress ALT plans.
//! * [`dataio`] reads and writes datasets and ships the Appliance B lab data.

// NaN must fail `!(x > 0.0)` style checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataio;
pub mod distributions;
pub mod error;
pub mod hazard;
pub mod inference;
pub mod pivotal;
pub mod planning;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};

/// Version stamped into every serialized document.
pub const FORMAT_VERSION: u32 = 1;
