use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::likelihood;
use super::optim::{self, HESSIAN_STEP};
use super::sample::{CensoredSample, Prepared};
use crate::error::{positive, Error, Result};
use crate::distributions::softplus;
use crate::FORMAT_VERSION;

/// Fitted model family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Model {
    Weibull,
    BurrXii,
    /// Burr-XII with `k = 1`.
    LogLogistic,
    BurrXiiFixedK { k: f64 },
    /// Burr-XII times `exp[-gamma_tilde (t/lambda)^beta]`.
    ExtendedField,
    /// Lab Weibull and field Burr-XII sharing one shape.
    FrailtyJoint,
    /// Lab Weibull and field Burr-XII fitted independently.
    SeparateLabField,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub estimate: f64,
    /// `NaN` (serialized as `null`) when the estimate sits on a boundary.
    #[serde(with = "nan_as_null")]
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub evaluations: usize,
    /// Max-norm of the transformed-scale score divided by the sample size.
    pub gradient_norm: f64,
    pub at_boundary: bool,
    pub note: Option<String>,
}

/// Maximum-likelihood fit of one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub format_version: u32,
    pub model: Model,
    pub params: Vec<Parameter>,
    pub loglik: f64,
    /// Inverse observed information on the natural parameter scale.
    pub covariance: Vec<Vec<f64>>,
    pub converged: bool,
    pub n_events: usize,
    pub n_censored: usize,
    pub diagnostics: FitDiagnostics,
}

impl FitResult {
    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.estimate)
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.std_error)
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.params.iter().map(|p| p.estimate).collect()
    }

    pub fn std_errors(&self) -> Vec<f64> {
        self.params.iter().map(|p| p.std_error).collect()
    }

    /// Number of free parameters.
    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit results always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("fit result JSON: {e}")))
    }
}

/// Common-shape fit plus the implied gamma frailty rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointFitResult {
    pub fit: FitResult,
    /// `(lambda / alpha)^beta`
    pub mu: f64,
    pub mu_std_error: f64,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

type LogLik<'a> = Box<dyn Fn(&[f64]) -> f64 + 'a>;

/// A maximization problem over strictly positive parameters, optimized on
/// the log scale.
struct Problem<'a> {
    model: Model,
    names: &'static [&'static str],
    n_obs: usize,
    n_events: usize,
    n_censored: usize,
    loglik: LogLik<'a>,
}

impl Problem<'_> {
    fn ll_internal(&self, u: &[f64]) -> f64 {
        let theta: Vec<f64> = u.iter().map(|v| v.exp()).collect();
        let v = (self.loglik)(&theta);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }

    /// Best optimum over the given natural-scale starting points.
    fn solve(&self, starts: &[Vec<f64>]) -> FitResult {
        let scale = self.n_obs.max(1) as f64;
        let best = starts
            .iter()
            .filter(|s| s.iter().all(|v| v.is_finite() && *v > 0.0))
            .map(|s| {
                let u0: Vec<f64> = s.iter().map(|v| v.ln()).collect();
                optim::maximize(|u| self.ll_internal(u), &u0, scale)
            })
            .max_by(|a, b| a.value.total_cmp(&b.value));
        let Some(best) = best else {
            return self.failed("no valid starting point");
        };
        self.assemble(&best.x, best.value, &best.gradient, best.evaluations)
    }

    fn assemble(&self, u: &[f64], value: f64, gradient: &[f64], evaluations: usize) -> FitResult {
        let dim = u.len();
        let theta: Vec<f64> = u.iter().map(|v| v.exp()).collect();
        let grad_norm = gradient.iter().fold(0.0f64, |m, g| m.max(g.abs())) / self.n_obs.max(1) as f64;
        let h = optim::hessian(&mut |x: &[f64]| self.ll_internal(x), u, HESSIAN_STEP);
        let information = -h;
        let (covariance, pd) = match information.clone().cholesky() {
            Some(chol) => {
                let inv = chol.inverse();
                let jac = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(theta.clone()));
                (&jac * inv * &jac, true)
            }
            None => (DMatrix::from_element(dim, dim, f64::NAN), false),
        };
        let converged = pd && value.is_finite() && grad_norm < 1e-6;
        let note = if !pd {
            Some("observed information is not positive definite".to_string())
        } else if grad_norm >= 1e-6 {
            Some(format!("score not zero at optimum (scaled norm {grad_norm:.3e})"))
        } else {
            None
        };
        FitResult {
            format_version: FORMAT_VERSION,
            model: self.model,
            params: self
                .names
                .iter()
                .zip(&theta)
                .enumerate()
                .map(|(i, (n, &est))| Parameter {
                    name: n.to_string(),
                    estimate: est,
                    std_error: covariance[(i, i)].sqrt(),
                })
                .collect(),
            loglik: value,
            covariance: matrix_rows(&covariance),
            converged,
            n_events: self.n_events,
            n_censored: self.n_censored,
            diagnostics: FitDiagnostics { evaluations, gradient_norm: grad_norm, at_boundary: false, note },
        }
    }

    fn failed(&self, why: &str) -> FitResult {
        let dim = self.names.len();
        FitResult {
            format_version: FORMAT_VERSION,
            model: self.model,
            params: self
                .names
                .iter()
                .map(|n| Parameter { name: n.to_string(), estimate: f64::NAN, std_error: f64::NAN })
                .collect(),
            loglik: f64::NEG_INFINITY,
            covariance: vec![vec![f64::NAN; dim]; dim],
            converged: false,
            n_events: self.n_events,
            n_censored: self.n_censored,
            diagnostics: FitDiagnostics {
                evaluations: 0,
                gradient_norm: f64::NAN,
                at_boundary: false,
                note: Some(why.to_string()),
            },
        }
    }
}

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn require_failures(sample: &CensoredSample, needed: usize) -> Result<usize> {
    let got = sample.n_events();
    if got < needed {
        Err(Error::InsufficientData { needed, got })
    } else {
        Ok(got)
    }
}

/// Weibull starting values from least squares on the Weibull probability
/// plot, using Kaplan–Meier midpoint plotting positions.
pub(crate) fn probability_plot_start(sample: &CensoredSample) -> (f64, f64) {
    let mut obs = sample.observations().to_vec();
    obs.sort_by(|a, b| a.time.total_cmp(&b.time).then(b.failed.cmp(&a.failed)));
    let mut at_risk = obs.len() as f64;
    let mut surv = 1.0;
    let mut pts = Vec::new();
    for o in &obs {
        if o.failed {
            let next = surv * (1.0 - 1.0 / at_risk);
            let f = 1.0 - 0.5 * (surv + next);
            pts.push((o.time.ln(), (-(-f).ln_1p()).ln()));
            surv = next;
        }
        at_risk -= 1.0;
    }
    let fallback = || {
        let total: f64 = obs.iter().map(|o| o.time).sum();
        (total / (pts.len().max(1)) as f64, 1.0)
    };
    if pts.len() < 2 {
        return fallback();
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return fallback();
    }
    let slope = sxy / sxx;
    if !(slope.is_finite() && slope > 0.0) {
        return fallback();
    }
    let alpha = (mx - my / slope).exp();
    (alpha, slope)
}

/// Weibull fit of (lab) data.
pub fn fit_weibull(sample: &CensoredSample) -> Result<FitResult> {
    let events = require_failures(sample, 2)?;
    let prep = sample.prepared();
    let problem = Problem {
        model: Model::Weibull,
        names: &["alpha", "beta"],
        n_obs: sample.len(),
        n_events: events,
        n_censored: sample.n_censored(),
        loglik: Box::new(|t: &[f64]| likelihood::weibull(&prep, t[0], t[1])),
    };
    let (a0, b0) = probability_plot_start(sample);
    Ok(problem.solve(&[vec![a0, b0]]))
}

/// Burr-XII fit; `fix_k = Some(1.0)` gives the log-logistic fit.
pub fn fit_burr12(sample: &CensoredSample, fix_k: Option<f64>) -> Result<FitResult> {
    let events = require_failures(sample, if fix_k.is_some() { 2 } else { 3 })?;
    let prep = sample.prepared();
    let (a0, b0) = probability_plot_start(sample);
    let matched_scale = |k: f64| a0 * k.powf(1.0 / b0);
    let fit = match fix_k {
        Some(k) => {
            let k = positive("k", k)?;
            let problem = Problem {
                model: if k == 1.0 { Model::LogLogistic } else { Model::BurrXiiFixedK { k } },
                names: &["lambda", "beta"],
                n_obs: sample.len(),
                n_events: events,
                n_censored: sample.n_censored(),
                loglik: Box::new(move |t: &[f64]| likelihood::burr(&prep, t[0], t[1], k)),
            };
            problem.solve(&[vec![matched_scale(k), b0], vec![a0, b0]])
        }
        None => {
            let problem = Problem {
                model: Model::BurrXii,
                names: &["lambda", "beta", "k"],
                n_obs: sample.len(),
                n_events: events,
                n_censored: sample.n_censored(),
                loglik: Box::new(|t: &[f64]| likelihood::burr(&prep, t[0], t[1], t[2])),
            };
            let starts: Vec<Vec<f64>> =
                [1.0, 0.1, 0.01].iter().map(|&k| vec![matched_scale(k), b0, k]).collect();
            let mut fit = problem.solve(&starts);
            if !fit.converged && fit.estimates()[2] > 1e4 {
                fit.diagnostics.note = Some("k diverges: the data favour the Weibull limit".into());
            }
            fit
        }
    };
    Ok(fit)
}

/// Four-parameter field fit `(lambda, beta, k, gamma_tilde)` with
/// `gamma_tilde >= 0`.
///
/// When no positive `gamma_tilde` improves on the Burr-XII likelihood the
/// result sits on the boundary: `gamma_tilde = 0`, the Burr-XII likelihood,
/// and a `null` standard error for `gamma_tilde`.
pub fn fit_field_extended(sample: &CensoredSample) -> Result<FitResult> {
    let events = require_failures(sample, 4)?;
    let burr = fit_burr12(sample, None)?;
    let prep = sample.prepared();
    let problem = Problem {
        model: Model::ExtendedField,
        names: &["lambda", "beta", "k", "gamma_tilde"],
        n_obs: sample.len(),
        n_events: events,
        n_censored: sample.n_censored(),
        loglik: Box::new(|t: &[f64]| likelihood::extended(&prep, t[0], t[1], t[2], t[3])),
    };
    let b = burr.estimates();
    let mut starts: Vec<Vec<f64>> = [0.01, 0.1, 1.0]
        .iter()
        .map(|&g| vec![b[0], b[1], b[2], g])
        .collect();
    let (a0, b0) = probability_plot_start(sample);
    starts.push(vec![a0, b0, 1.0, 1.0]);
    let interior = problem.solve(&starts);
    if interior.loglik > burr.loglik + 1e-7 {
        return Ok(interior);
    }
    let mut cov = burr.covariance.clone();
    for row in &mut cov {
        row.push(0.0);
    }
    cov.push(vec![0.0; 4]);
    let mut params = burr.params.clone();
    params.push(Parameter { name: "gamma_tilde".into(), estimate: 0.0, std_error: f64::NAN });
    Ok(FitResult {
        model: Model::ExtendedField,
        params,
        covariance: cov,
        diagnostics: FitDiagnostics {
            at_boundary: true,
            note: Some("gamma_tilde on the boundary 0; Burr-XII optimum".into()),
            ..burr.diagnostics.clone()
        },
        ..burr
    })
}

/// Joint fit of the lab Weibull and field Burr-XII likelihoods with a common
/// shape `beta`.
pub fn fit_frailty_joint(lab: &CensoredSample, field: &CensoredSample) -> Result<JointFitResult> {
    require_failures(lab, 2)?;
    require_failures(field, 3)?;
    let lab_fit = fit_weibull(lab)?;
    let field_fit = fit_burr12(field, None)?;
    Ok(joint_from_fits(lab, field, &lab_fit, &field_fit))
}

/// Joint fit started from already computed separate fits.
pub(crate) fn joint_from_fits(
    lab: &CensoredSample,
    field: &CensoredSample,
    lab_fit: &FitResult,
    field_fit: &FitResult,
) -> JointFitResult {
    let (lp, fp) = (lab.prepared(), field.prepared());
    let problem = Problem {
        model: Model::FrailtyJoint,
        names: &["alpha", "beta", "lambda", "k"],
        n_obs: lab.len() + field.len(),
        n_events: lab.n_events() + field.n_events(),
        n_censored: lab.n_censored() + field.n_censored(),
        loglik: Box::new(|t: &[f64]| joint_loglik(&lp, &fp, t)),
    };
    let (a, bl) = (lab_fit.estimates()[0], lab_fit.estimates()[1]);
    let f = field_fit.estimates();
    let (lam, bw, k) = (f[0], f[1], f[2]);
    let mut starts = vec![vec![a, 0.5 * (bl + bw), lam, k], vec![a, bl, lam, k], vec![a, bw, lam, k]];
    if ![a, bl, lam, bw, k].iter().all(|v| v.is_finite() && *v > 0.0) {
        let (a0, b0) = probability_plot_start(lab);
        let (f0, g0) = probability_plot_start(field);
        starts = vec![vec![a0, b0, f0, 1.0], vec![a0, g0, f0 * 0.1f64.powf(1.0 / g0), 0.1]];
    }
    joint_result(problem.solve(&starts))
}

pub(crate) fn joint_loglik(lab: &Prepared, field: &Prepared, t: &[f64]) -> f64 {
    likelihood::weibull(lab, t[0], t[1]) + likelihood::burr(field, t[2], t[1], t[3])
}

fn joint_result(fit: FitResult) -> JointFitResult {
    let e = fit.estimates();
    let (alpha, beta, lambda) = (e[0], e[1], e[2]);
    let mu = (lambda / alpha).powf(beta);
    // d mu / d(alpha, beta, lambda, k)
    let grad = [-mu * beta / alpha, mu * (lambda / alpha).ln(), mu * beta / lambda, 0.0];
    let mut var = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            var += grad[i] * fit.covariance[i][j] * grad[j];
        }
    }
    JointFitResult { fit, mu, mu_std_error: var.sqrt() }
}

/// Lab Weibull and field model fitted separately, as one composite result
/// (parameters prefixed `lab.` / `field.`, block-diagonal covariance).
pub fn combine_separate(lab: &FitResult, field: &FitResult) -> FitResult {
    let (n1, n2) = (lab.params.len(), field.params.len());
    let mut cov = vec![vec![0.0; n1 + n2]; n1 + n2];
    for (i, row) in lab.covariance.iter().enumerate() {
        cov[i][..n1].copy_from_slice(row);
    }
    for (i, row) in field.covariance.iter().enumerate() {
        cov[n1 + i][n1..].copy_from_slice(row);
    }
    let prefixed = |prefix: &str, ps: &[Parameter]| -> Vec<Parameter> {
        ps.iter()
            .map(|p| Parameter { name: format!("{prefix}.{}", p.name), ..p.clone() })
            .collect()
    };
    let mut params = prefixed("lab", &lab.params);
    params.extend(prefixed("field", &field.params));
    FitResult {
        format_version: FORMAT_VERSION,
        model: Model::SeparateLabField,
        params,
        loglik: lab.loglik + field.loglik,
        covariance: cov,
        converged: lab.converged && field.converged,
        n_events: lab.n_events + field.n_events,
        n_censored: lab.n_censored + field.n_censored,
        diagnostics: FitDiagnostics {
            evaluations: lab.diagnostics.evaluations + field.diagnostics.evaluations,
            gradient_norm: lab.diagnostics.gradient_norm.max(field.diagnostics.gradient_norm),
            at_boundary: lab.diagnostics.at_boundary || field.diagnostics.at_boundary,
            note: None,
        },
    }
}

/// Log-likelihood of `sample` under `model` at natural-scale `params`, in the
/// same parameter order as the corresponding [`FitResult`].
pub fn loglik_at(model: Model, sample: &CensoredSample, params: &[f64]) -> Result<f64> {
    let p = sample.prepared();
    let need = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::Usage(format!("model expects {n} parameters, got {}", params.len())))
        }
    };
    Ok(match model {
        Model::Weibull => {
            need(2)?;
            likelihood::weibull(&p, params[0], params[1])
        }
        Model::BurrXii => {
            need(3)?;
            likelihood::burr(&p, params[0], params[1], params[2])
        }
        Model::LogLogistic => {
            need(2)?;
            likelihood::burr(&p, params[0], params[1], 1.0)
        }
        Model::BurrXiiFixedK { k } => {
            need(2)?;
            likelihood::burr(&p, params[0], params[1], k)
        }
        Model::ExtendedField => {
            need(4)?;
            likelihood::extended(&p, params[0], params[1], params[2], params[3])
        }
        Model::FrailtyJoint | Model::SeparateLabField => {
            return Err(Error::Usage("two-sample models need both samples; use joint_loglik_at".into()))
        }
    })
}

/// Joint (common-shape) log-likelihood at `(alpha, beta, lambda, k)`.
pub fn joint_loglik_at(lab: &CensoredSample, field: &CensoredSample, params: [f64; 4]) -> f64 {
    joint_loglik(&lab.prepared(), &field.prepared(), &params)
}

// ---------------------------------------------------------------------------
// Fast shape estimators for the Monte-Carlo loops.

/// Weibull shape MLE from the profile score
/// `r/b + sum_fail ln x - r sum w ln x / sum w = 0`, `w = x^b`.
pub(crate) fn weibull_shape_mle(p: &Prepared) -> Option<f64> {
    let r = p.events() as f64;
    if p.events() < 2 {
        return None;
    }
    let shift = p
        .fail_logs
        .iter()
        .copied()
        .chain(p.censored.iter().map(|c| c.0))
        .fold(f64::NEG_INFINITY, f64::max);
    let mean_fail = p.sum_fail_logs / r - shift;
    // returns (score / r, derivative / r)
    let score = |b: f64| {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &lx in &p.fail_logs {
            let y = lx - shift;
            let w = (b * y).exp();
            s0 += w;
            s1 += w * y;
            s2 += w * y * y;
        }
        for &(lc, m) in &p.censored {
            let y = lc - shift;
            let w = m * (b * y).exp();
            s0 += w;
            s1 += w * y;
            s2 += w * y * y;
        }
        let m1 = s1 / s0;
        (1.0 / b + mean_fail - m1, -1.0 / (b * b) - (s2 / s0 - m1 * m1))
    };
    let (mut lo, mut hi) = (0.5, 2.0);
    let mut guard = 0;
    while score(lo).0 < 0.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 60 {
            return None;
        }
    }
    while score(hi).0 > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 120 {
            return None;
        }
    }
    let mut b = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (g, dg) = score(b);
        if g > 0.0 {
            lo = b;
        } else {
            hi = b;
        }
        let mut next = b - g / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - b).abs() <= 1e-13 * b {
            return Some(next);
        }
        b = next;
    }
    Some(b)
}

/// Burr-XII `(lambda, beta)` MLE with `k` held fixed, by Newton's method on
/// `(ln lambda, ln beta)` with analytic derivatives. `None` when no
/// stationary point is reached.
pub(crate) fn burr_fixed_k_newton(p: &Prepared, k: f64) -> Option<(f64, f64)> {
    let b0 = weibull_shape_mle(p)?;
    let r = p.events() as f64;
    let shift = p.fail_logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut cum = 0.0;
    for &lx in &p.fail_logs {
        cum += (b0 * (lx - shift)).exp();
    }
    for &(lc, m) in &p.censored {
        cum += m * (b0 * (lc - shift)).exp();
    }
    let log_alpha = shift + (cum / r).ln() / b0;
    let terms = || {
        p.fail_logs
            .iter()
            .map(move |&x| (x, k + 1.0))
            .chain(p.censored.iter().map(move |&(x, m)| (x, k * m)))
    };
    let value = |l: f64, b: f64| {
        let sp: f64 = terms().map(|(x, w)| w * softplus(b * (x - l))).sum();
        r * b.ln() + b * (p.sum_fail_logs - r * l) - sp
    };
    // gradient and Hessian in (l, v = ln beta)
    let derivs = |l: f64, b: f64| {
        let (mut s0, mut s1, mut s2, mut d0, mut d1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, w) in terms() {
            let y = x - l;
            let s = sigmoid(b * y);
            let ds = s * (1.0 - s);
            s0 += w * s;
            s1 += w * s * y;
            d0 += w * ds;
            d1 += w * ds * y;
            s2 += w * ds * y * y;
        }
        let sum_y = p.sum_fail_logs - r * l;
        let gl = -r * b + b * s0;
        let gb = r / b + sum_y - s1;
        let hll = -b * b * d0;
        let hlb = -r + s0 + b * d1;
        let hbb = -r / (b * b) - s2;
        ([gl, b * gb], [[hll, b * hlb], [b * hlb, b * b * hbb + b * gb]])
    };
    let (mut l, mut v) = (log_alpha + k.ln() / b0, b0.ln());
    let mut cur = value(l, v.exp());
    let tol = 1e-9 * p.n as f64;
    for _ in 0..200 {
        let (g, h) = derivs(l, v.exp());
        if g[0].abs().max(g[1].abs()) < tol {
            return cur.is_finite().then(|| (l.exp(), v.exp()));
        }
        let (a, b, c) = (-h[0][0], -h[0][1], -h[1][1]);
        let det = a * c - b * b;
        let mut step = if a > 0.0 && det > 0.0 {
            [(c * g[0] - b * g[1]) / det, (a * g[1] - b * g[0]) / det]
        } else {
            let norm = g[0].hypot(g[1]);
            [0.1 * g[0] / norm, 0.1 * g[1] / norm]
        };
        let mut accepted = false;
        for _ in 0..60 {
            let (nl, nv) = (l + step[0], v + step[1]);
            let next = value(nl, nv.exp());
            if next.is_finite() && next >= cur - 1e-12 * cur.abs() {
                l = nl;
                v = nv;
                cur = next;
                accepted = true;
                break;
            }
            step = [0.5 * step[0], 0.5 * step[1]];
        }
        if !accepted {
            return None;
        }
    }
    None
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
