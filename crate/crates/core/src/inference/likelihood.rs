//! Censored log-likelihoods (full density form, including the `-ln t`
//! Jacobian terms of the failures).

use super::sample::Prepared;
use crate::distributions::softplus;

pub(crate) fn weibull(p: &Prepared, alpha: f64, beta: f64) -> f64 {
    let la = alpha.ln();
    let r = p.events() as f64;
    let mut cum = 0.0;
    for &lx in &p.fail_logs {
        cum += (beta * (lx - la)).exp();
    }
    for &(lc, m) in &p.censored {
        cum += m * (beta * (lc - la)).exp();
    }
    r * (beta.ln() - la) + (beta - 1.0) * (p.sum_fail_logs - r * la) - cum
}

pub(crate) fn burr(p: &Prepared, lambda: f64, beta: f64, k: f64) -> f64 {
    let ll = lambda.ln();
    let r = p.events() as f64;
    let mut s = 0.0;
    for &lt in &p.fail_logs {
        s += softplus(beta * (lt - ll));
    }
    let mut c = 0.0;
    for &(lc, m) in &p.censored {
        c += m * softplus(beta * (lc - ll));
    }
    r * (k.ln() + beta.ln() - ll) + (beta - 1.0) * (p.sum_fail_logs - r * ll)
        - (k + 1.0) * s
        - k * c
}

/// Field family with survival `[(t/lambda)^beta + 1]^(-k) exp[-g (t/lambda)^beta]`.
pub(crate) fn extended(p: &Prepared, lambda: f64, beta: f64, k: f64, g: f64) -> f64 {
    let ll = lambda.ln();
    let r = p.events() as f64;
    let mut s = 0.0;
    for &lt in &p.fail_logs {
        let x = beta * (lt - ll);
        let l1p = softplus(x);
        s += -k * l1p - g * x.exp() + (k * (-l1p).exp() + g).ln();
    }
    for &(lc, m) in &p.censored {
        let x = beta * (lc - ll);
        s -= m * (k * softplus(x) + g * x.exp());
    }
    r * (beta.ln() - ll) + (beta - 1.0) * (p.sum_fail_logs - r * ll) + s
}
