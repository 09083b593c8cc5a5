//! Derivative-free simplex search followed by a Newton polish on numerical
//! derivatives. All routines work on an unconstrained (transformed)
//! parameter vector.

use nalgebra::{DMatrix, DVector};

/// Relative step for central-difference gradients.
pub(crate) const GRADIENT_STEP: f64 = 1e-5;
/// Relative step for central-difference Hessians.
pub(crate) const HESSIAN_STEP: f64 = 1e-4;

#[derive(Debug, Clone)]
pub(crate) struct Maximum {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub evaluations: usize,
}

#[inline]
fn finite_or(v: f64, fallback: f64) -> f64 {
    if v.is_nan() {
        fallback
    } else {
        v
    }
}

/// Minimizes `f` from `x0` with an adaptive Nelder–Mead simplex.
/// Returns `(argmin, min, evaluations)`.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    ftol: f64,
    xtol: f64,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);
    let mut eval = |x: &[f64], count: &mut usize| {
        *count += 1;
        finite_or(f(x), f64::INFINITY)
    };
    let mut evals = 0;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evals)).collect();
    let mut order: Vec<usize> = (0..=n).collect();

    while evals < max_evals {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        let spread = values[worst] - values[best];
        let size = simplex
            .iter()
            .flat_map(|p| p.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() <= ftol * (1.0 + values[best].abs()) && size <= xtol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / nf;
            }
        }
        let towards = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = towards(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < values[best] {
            let xe = towards(alpha * gamma);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[worst] {
            let xc = towards(alpha * rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = towards(-rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        // shrink towards the best vertex
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + sigma * (*x - a);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex[best].clone(), values[best], evals)
}

fn steps(x: &[f64], rel: f64) -> Vec<f64> {
    x.iter().map(|v| rel * v.abs().max(1.0)).collect()
}

pub(crate) fn gradient<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], rel: f64) -> Vec<f64> {
    let h = steps(x, rel);
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            p[i] = x[i] + h[i];
            let up = f(&p);
            p[i] = x[i] - h[i];
            let down = f(&p);
            p[i] = x[i];
            (up - down) / (2.0 * h[i])
        })
        .collect()
}

pub(crate) fn hessian<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &[f64], rel: f64) -> DMatrix<f64> {
    let n = x.len();
    let h = steps(x, rel);
    let f0 = f(x);
    let mut p = x.to_vec();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        p[i] = x[i] + h[i];
        let up = f(&p);
        p[i] = x[i] - h[i];
        let down = f(&p);
        p[i] = x[i];
        out[(i, i)] = (up - 2.0 * f0 + down) / (h[i] * h[i]);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                p[i] = x[i] + si * h[i];
                p[j] = x[j] + sj * h[j];
                let v = f(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0))
                / (4.0 * h[i] * h[j]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Maximizes `ll`: simplex search (with one restart) then Newton steps on
/// numerical derivatives with backtracking.
pub(crate) fn maximize<F: FnMut(&[f64]) -> f64>(mut ll: F, x0: &[f64], scale: f64) -> Maximum {
    let dim = x0.len();
    let mut evals = 0;
    let mut x = x0.to_vec();
    for step in [0.3, 0.05] {
        let (xm, _, e) = nelder_mead(|p| -ll(p), &x, step, 600 * dim, 1e-12, 1e-8);
        evals += e;
        x = xm;
    }
    let mut value = finite_or(ll(&x), f64::NEG_INFINITY);

    for _ in 0..50 {
        let g = gradient(&mut ll, &x, GRADIENT_STEP);
        let h = hessian(&mut ll, &x, HESSIAN_STEP);
        evals += 2 * dim + 1 + 2 * dim * dim;
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale < 1e-11 {
            break;
        }
        let Some(chol) = (-h).cholesky() else { break };
        let d = chol.solve(&DVector::from_vec(g));
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + t * b).collect();
            let v = finite_or(ll(&cand), f64::NEG_INFINITY);
            evals += 1;
            if v >= value {
                x = cand;
                value = v;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || d.amax() * t < 1e-13 {
            break;
        }
    }
    let gradient = gradient(&mut ll, &x, GRADIENT_STEP);
    Maximum { x, value, gradient, evaluations: evals + 2 * dim }
}
