//! Censored-data likelihood fitting, hypothesis tests and the product-limit
//! estimator.

mod fit;
mod hypothesis;
mod km;
pub(crate) mod likelihood;
pub(crate) mod optim;
mod sample;

pub use fit::{
    combine_separate, fit_burr12, fit_field_extended, fit_frailty_joint, fit_weibull, joint_loglik_at,
    loglik_at, FitDiagnostics, FitResult, JointFitResult, Model, Parameter,
};
pub(crate) use fit::{burr_fixed_k_newton, joint_from_fits, weibull_shape_mle};
pub use hypothesis::{aic, aic_from, lr_test, lr_test_boundary, lr_test_loglik, LrTestResult};
pub use km::{kaplan_meier, KaplanMeier, KmStep};
pub use sample::{CensoredSample, Censoring, Observation};
pub(crate) use sample::Prepared;
