//! Shape classification of the frailty-marginal field hazard
//! `h(t) = (beta/alpha)(t/alpha)^(beta-1) [gamma + k / ((t/alpha)^beta + mu)]`.
//!
//! With `y = (t/alpha)^beta`, the sign of `h'(t)` is the sign of the quadratic
//! `q(y) = (beta-1) gamma y^2 + (2 gamma mu (beta-1) - k) y + mu (mu gamma + k)(beta-1)`,
//! whose discriminant factors as `k (k - 4 gamma mu beta (beta-1))`.
//! Turning points of `h` are the positive roots mapped back by
//! `t = alpha y^(1/beta)`.

use serde::{Deserialize, Serialize};

use crate::distributions::{FrailtyFieldParams, Lifetime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeLabel {
    Decreasing,
    Increasing,
    /// Increases, decreases, then increases again.
    NShape,
    /// Unimodal: rises to a single peak then declines.
    UpsideDownBathtub,
    /// Double root of the sign quadratic: nondecreasing with one stationary
    /// inflection point.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HazardShape {
    pub label: ShapeLabel,
    /// Times of local extrema (or of the tangency for `Boundary`), ascending.
    pub turning_points: Vec<f64>,
}

/// Coefficients of the sign quadratic in `y = (t/alpha)^beta`.
fn sign_quadratic(p: &FrailtyFieldParams) -> (f64, f64, f64) {
    let b1 = p.beta - 1.0;
    (
        b1 * p.gamma,
        2.0 * p.gamma * p.mu * b1 - p.k,
        p.mu * (p.mu * p.gamma + p.k) * b1,
    )
}

pub fn classify_shape(params: FrailtyFieldParams) -> Result<HazardShape> {
    let p = FrailtyFieldParams::new(params.alpha, params.beta, params.mu, params.k, params.gamma)?;
    let to_time = |y: f64| p.alpha * y.powf(1.0 / p.beta);

    if p.beta <= 1.0 {
        return Ok(HazardShape { label: ShapeLabel::Decreasing, turning_points: vec![] });
    }
    if p.gamma == 0.0 {
        // q(y) = k[(beta-1) mu - y]
        return Ok(HazardShape {
            label: ShapeLabel::UpsideDownBathtub,
            turning_points: vec![to_time((p.beta - 1.0) * p.mu)],
        });
    }

    let lhs = p.beta * p.beta - p.beta;
    let rhs = p.k / (4.0 * p.gamma * p.mu);
    let (a, b, c) = sign_quadratic(&p);
    if lhs > rhs {
        return Ok(HazardShape { label: ShapeLabel::Increasing, turning_points: vec![] });
    }
    if lhs == rhs {
        return Ok(HazardShape {
            label: ShapeLabel::Boundary,
            turning_points: vec![to_time(-b / (2.0 * a))],
        });
    }

    // b < 0 here, so both roots are positive.
    let disc = p.k * (p.k - 4.0 * p.gamma * p.mu * p.beta * (p.beta - 1.0));
    let q = -0.5 * (b - disc.sqrt());
    let (y1, y2) = (c / q, q / a);
    let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
    Ok(HazardShape {
        label: ShapeLabel::NShape,
        turning_points: vec![to_time(lo), to_time(hi)],
    })
}

/// Pointwise hazard on a strictly increasing, nonnegative grid.
pub fn hazard_profile(params: FrailtyFieldParams, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let p = FrailtyFieldParams::new(params.alpha, params.beta, params.mu, params.k, params.gamma)?;
    if t_grid.first().is_some_and(|&t| !(t >= 0.0)) {
        return Err(Error::Domain("hazard grid must be nonnegative".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("hazard grid must be strictly increasing".into()));
    }
    Ok(t_grid.iter().map(|&t| (t, p.hazard(t))).collect())
}

/// Log-spaced time grid between the `p_lo` and `p_hi` quantiles of the field
/// distribution.
pub fn quantile_log_grid(params: FrailtyFieldParams, p_lo: f64, p_hi: f64, n: usize) -> Result<Vec<f64>> {
    let p = FrailtyFieldParams::new(params.alpha, params.beta, params.mu, params.k, params.gamma)?;
    if !(0.0 < p_lo && p_lo < p_hi && p_hi < 1.0) || n < 2 {
        return Err(Error::Domain(format!(
            "need 0 < p_lo < p_hi < 1 and n >= 2, got ({p_lo}, {p_hi}, {n})"
        )));
    }
    let lo = p.quantile_numeric(p_lo)?.ln();
    let hi = p.quantile_numeric(p_hi)?.ln();
    Ok((0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

/// `t,hazard` CSV for plotting.
pub fn profile_csv(profile: &[(f64, f64)]) -> String {
    let mut out = String::from("t,hazard\n");
    for (t, h) in profile {
        out.push_str(&format!("{t},{h}\n"));
    }
    out
}
