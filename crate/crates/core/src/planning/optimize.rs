use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::criteria::criterion_gradient;
use super::info::{is_singular, mix, sev_unit_info, stress_info, zeta_at};
use super::{Criterion, PlanConstraint, PlanningValues, TestPlan};
use crate::error::{Error, Result};
use crate::inference::optim::nelder_mead;
use crate::FORMAT_VERSION;

/// Evaluates the criterion's asymptotic standard deviation for many plans
/// sharing the same inputs.
struct Evaluator {
    sigma: f64,
    n: f64,
    gradient: Vector3<f64>,
    high: [[f64; 3]; 3],
    values: PlanningValues,
    constraint: PlanConstraint,
}

impl Evaluator {
    fn new(values: &PlanningValues, constraint: &PlanConstraint, criterion: Criterion) -> Result<Self> {
        let g = criterion_gradient(values, criterion)?;
        let f_high = sev_unit_info(zeta_at(0.0, values, constraint.censoring))?;
        Ok(Self {
            sigma: values.sigma,
            n: constraint.units(),
            gradient: Vector3::from(g),
            high: stress_info(f_high, 0.0, values.sigma),
            values: *values,
            constraint: *constraint,
        })
    }

    fn low_info(&self, xi: f64) -> Result<[[f64; 3]; 3]> {
        let f = sev_unit_info(zeta_at(xi, &self.values, self.constraint.censoring))?;
        Ok(stress_info(f, xi, self.sigma))
    }

    fn sd_with(&self, low: &[[f64; 3]; 3], pi: f64) -> f64 {
        let m = mix(pi, low, &self.high, self.n);
        if is_singular(&m) {
            return f64::INFINITY;
        }
        let Some(chol) = Matrix3::from_fn(|i, j| m[i][j]).cholesky() else {
            return f64::INFINITY;
        };
        let x = chol.solve(&self.gradient);
        let av = self.gradient.dot(&x);
        if av.is_finite() && av >= 0.0 {
            av.sqrt()
        } else {
            f64::INFINITY
        }
    }

    fn sd(&self, xi: f64, pi: f64) -> f64 {
        if !(xi > 0.0 && xi < 1.0 && pi > 0.0 && pi < 1.0) {
            return f64::INFINITY;
        }
        match self.low_info(xi) {
            Ok(low) => self.sd_with(&low, pi),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Asymptotic standard deviation of the criterion's ML estimator under the
/// plan, `sqrt(g' I^-1 g)`. A singular information matrix yields `+inf`.
pub fn asymptotic_sd(
    plan: TestPlan,
    values: &PlanningValues,
    constraint: &PlanConstraint,
    criterion: Criterion,
) -> Result<f64> {
    let ev = Evaluator::new(values, constraint, criterion)?;
    let low = ev.low_info(plan.xi_l)?;
    Ok(ev.sd_with(&low, plan.pi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalPlan {
    pub format_version: u32,
    pub plan: TestPlan,
    pub sd: f64,
    pub criterion: Criterion,
    pub values: PlanningValues,
    pub constraint: PlanConstraint,
    pub convention: String,
    pub grid_step: f64,
    /// Best grid point before the simplex refinement.
    pub grid_best: TestPlan,
    pub grid_best_sd: f64,
    /// Other grid points tied with the grid minimum.
    pub grid_ties: Vec<TestPlan>,
}

impl OptimalPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plans always serialize")
    }
}

/// Grid search over `(xi_L, pi)` with step 0.01, refined by a simplex search
/// started from the best grid point.
pub fn optimize_plan(
    values: &PlanningValues,
    constraint: &PlanConstraint,
    criterion: Criterion,
) -> Result<OptimalPlan> {
    const STEPS: usize = 100;
    let ev = Evaluator::new(values, constraint, criterion)?;
    let axis: Vec<f64> = (1..STEPS).map(|i| i as f64 / STEPS as f64).collect();
    let grid = evaluate_grid(&ev, &axis, &axis)?;
    let mut best = (f64::INFINITY, 0, 0);
    for (i, row) in grid.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::NoFeasiblePlan);
    }
    let grid_best = TestPlan { xi_l: axis[best.1], pi: axis[best.2] };
    let mut grid_ties = Vec::new();
    for (i, row) in grid.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if (i, j) != (best.1, best.2) && v <= best.0 * (1.0 + 1e-9) {
                grid_ties.push(TestPlan { xi_l: axis[i], pi: axis[j] });
            }
        }
    }
    let (x, sd, _) = nelder_mead(
        |x| ev.sd(x[0], x[1]),
        &[grid_best.xi_l, grid_best.pi],
        0.5 / STEPS as f64,
        4000,
        1e-14,
        1e-10,
    );
    let (plan, sd) = if sd <= best.0 {
        (TestPlan { xi_l: x[0], pi: x[1] }, sd)
    } else {
        (grid_best, best.0)
    };
    Ok(OptimalPlan {
        format_version: FORMAT_VERSION,
        plan,
        sd,
        criterion,
        values: *values,
        constraint: *constraint,
        convention: constraint.convention(),
        grid_step: 1.0 / STEPS as f64,
        grid_best,
        grid_best_sd: best.0,
        grid_ties,
    })
}

fn evaluate_grid(ev: &Evaluator, xis: &[f64], pis: &[f64]) -> Result<Vec<Vec<f64>>> {
    xis.par_iter()
        .map(|&xi| {
            let low = ev.low_info(xi)?;
            Ok(pis.iter().map(|&pi| ev.sd_with(&low, pi)).collect())
        })
        .collect()
}

/// Criterion standard deviation at cell centres `(i + 0.5) / resolution` of
/// the unit square; infeasible cells hold `+inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourGrid {
    pub xi_l: Vec<f64>,
    pub pi: Vec<f64>,
    /// `sd[i][j]` at `(xi_l[i], pi[j])`.
    pub sd: Vec<Vec<f64>>,
}

impl ContourGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi_L,pi,sd\n");
        for (i, &x) in self.xi_l.iter().enumerate() {
            for (j, &p) in self.pi.iter().enumerate() {
                let v = self.sd[i][j];
                let cell = if v.is_finite() { v.to_string() } else { "inf".into() };
                out.push_str(&format!("{x},{p},{cell}\n"));
            }
        }
        out
    }

    /// Indices of the smallest cell.
    pub fn argmin(&self) -> Option<(usize, usize)> {
        let mut best: Option<(f64, usize, usize)> = None;
        for (i, row) in self.sd.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v.is_finite() && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|b| (b.1, b.2))
    }
}

pub fn contour_grid(
    values: &PlanningValues,
    constraint: &PlanConstraint,
    criterion: Criterion,
    resolution: usize,
) -> Result<ContourGrid> {
    if resolution < 2 {
        return Err(Error::Usage("contour resolution must be at least 2".into()));
    }
    let ev = Evaluator::new(values, constraint, criterion)?;
    let axis: Vec<f64> = (0..resolution).map(|i| (i as f64 + 0.5) / resolution as f64).collect();
    let sd = evaluate_grid(&ev, &axis, &axis)?;
    Ok(ContourGrid { xi_l: axis.clone(), pi: axis, sd })
}
