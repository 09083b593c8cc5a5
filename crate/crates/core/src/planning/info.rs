use serde::{Deserialize, Serialize};

use super::{PlanCensoring, PlanConstraint, PlanningValues, TestPlan};
use crate::error::{Error, Result};

const LOWER: f64 = -60.0;
const UPPER: f64 = 6.0;
const QUAD_TOL: f64 = 1e-14;
const BREAKS: [f64; 5] = [-30.0, -10.0, -3.0, 0.0, 2.0];

/// `(S - S_H) / (S_0 - S_H)`: 0 at the high test stress, 1 at use conditions.
pub fn standardize_stress(s: f64, s0: f64, sh: f64) -> Result<f64> {
    if s0 == sh || !(s0 - sh).is_finite() {
        return Err(Error::Domain(format!("degenerate stress range: S0 = SH = {s0}")));
    }
    Ok((s - sh) / (s0 - sh))
}

/// Expected Fisher information per unit for `(location, scale)` of a
/// standard SEV observation right-censored at `zeta` (`+inf` for complete
/// data), in units of `1 / sigma^2`.
pub fn sev_unit_info(zeta: f64) -> Result<[[f64; 2]; 2]> {
    if zeta.is_nan() {
        return Err(Error::Domain("zeta is NaN".into()));
    }
    if zeta <= LOWER {
        return Ok(censor_terms(zeta));
    }
    let hi = zeta.min(UPPER);
    let integral = |g: fn(f64) -> f64| -> Result<f64> {
        let mut knots = vec![LOWER];
        knots.extend(BREAKS.iter().copied().filter(|&b| b > LOWER && b < hi));
        knots.push(hi);
        let (mut total, mut err, mut evals) = (0.0, 0.0, 0);
        for w in knots.windows(2) {
            let out = quadrature::integrate(|z| g(z) * sev_pdf(z), w[0], w[1], QUAD_TOL);
            total += out.integral;
            err += out.error_estimate;
            evals += out.num_function_evaluations;
        }
        if err.is_finite() && err < 1e-10 {
            Ok(total)
        } else {
            Err(Error::Numerical(format!(
                "SEV information quadrature at zeta = {zeta}: error estimate {err:e} after {evals} evaluations"
            )))
        }
    };
    let f11 = integral(|z| z.exp())?;
    let f12 = integral(|z| (z + 1.0) * z.exp() - 1.0)?;
    let f22 = integral(|z| -1.0 - 2.0 * z + (2.0 * z + z * z) * z.exp())?;
    let c = censor_terms(zeta);
    Ok([[f11 + c[0][0], f12 + c[0][1]], [f12 + c[1][0], f22 + c[1][1]]])
}

fn sev_pdf(z: f64) -> f64 {
    (z - z.exp()).exp()
}

/// Contribution of the censored mass beyond `zeta`.
fn censor_terms(zeta: f64) -> [[f64; 2]; 2] {
    if zeta == f64::INFINITY {
        return [[0.0; 2]; 2];
    }
    // e^zeta * S(zeta)
    let m = (zeta - zeta.exp()).exp();
    let off = m * (1.0 + zeta);
    [[m, off], [off, m * zeta * (2.0 + zeta)]]
}

/// Plan information for `(v0, v1, sigma)` with a flag set when it is
/// numerically singular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanInformation {
    pub matrix: [[f64; 3]; 3],
    pub singular: bool,
}

/// Standardized log censoring time of a unit tested at stress `xi`.
pub(crate) fn zeta_at(xi: f64, values: &PlanningValues, censoring: PlanCensoring) -> f64 {
    match censoring {
        PlanCensoring::TypeI { censor_time } => {
            (censor_time.ln() - (values.v0 + values.v1 * xi)) / values.sigma
        }
        PlanCensoring::TypeII { fail_fraction } => (-(-fail_fraction).ln_1p()).ln(),
    }
}

/// `J(xi)`: the SEV information mapped to `(v0, v1, sigma)` at stress `xi`.
pub(crate) fn stress_info(f: [[f64; 2]; 2], xi: f64, sigma: f64) -> [[f64; 3]; 3] {
    let s2 = sigma * sigma;
    [
        [f[0][0] / s2, xi * f[0][0] / s2, f[0][1] / s2],
        [xi * f[0][0] / s2, xi * xi * f[0][0] / s2, xi * f[0][1] / s2],
        [f[0][1] / s2, xi * f[0][1] / s2, f[1][1] / s2],
    ]
}

pub(crate) fn mix(pi: f64, low: &[[f64; 3]; 3], high: &[[f64; 3]; 3], n: f64) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = n * (pi * low[i][j] + (1.0 - pi) * high[i][j]);
        }
    }
    m
}

pub(crate) fn is_singular(m: &[[f64; 3]; 3]) -> bool {
    let mat = nalgebra::Matrix3::from_fn(|i, j| m[i][j]);
    let eig = mat.symmetric_eigenvalues();
    let max = eig.max();
    !(max > 0.0) || eig.min() <= 1e-12 * max
}

/// Fisher information of the two-stress plan for `(v0, v1, sigma)`.
pub fn plan_fisher_info(
    plan: TestPlan,
    values: &PlanningValues,
    constraint: &PlanConstraint,
) -> Result<PlanInformation> {
    let f_low = sev_unit_info(zeta_at(plan.xi_l, values, constraint.censoring))?;
    let f_high = sev_unit_info(zeta_at(0.0, values, constraint.censoring))?;
    let matrix = mix(
        plan.pi,
        &stress_info(f_low, plan.xi_l, values.sigma),
        &stress_info(f_high, 0.0, values.sigma),
        constraint.units(),
    );
    Ok(PlanInformation { singular: is_singular(&matrix), matrix })
}
