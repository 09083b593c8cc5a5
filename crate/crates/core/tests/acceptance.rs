#![allow(clippy::type_complexity, clippy::needless_range_loop)]

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use frailty_alt::dataio::appliance_b_lab;
use frailty_alt::distributions::{
    frailty_marginal_eval, sample, sample_field_time, BurrXIIParams, FrailtyFieldParams, GammaFrailtyParams,
    LifetimeDistribution, WeibullParams, Which,
};
use frailty_alt::hazard::{classify_shape, ShapeLabel};
use frailty_alt::inference::{aic_from, fit_burr12, fit_frailty_joint, fit_weibull, CensoredSample, Censoring};
use frailty_alt::pivotal::{
    shape_ratio, simulate_ratio_distribution, simulation_study, DesignKind, Method, Scenario, SideDesign,
    StudyConfig,
};
use frailty_alt::planning::{
    criterion_gradient, field_failure_prob, field_quantile, optimize_plan, sev_unit_info, Criterion,
    PlanConstraint, PlanningValues,
};
use frailty_alt::rng::task_rng;
use frailty_alt::stats::{ks_two_sample, ks_two_sample_p_value};
use rand::Rng;
use rand_distr::{Distribution, Exp1};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Outcome); 7] = [
        (1, "lab fit reproduction", Some(Duration::from_secs(1)), lab_fit),
        (2, "optimal plan reproduction", Some(Duration::from_secs(30)), optimal_plan),
        (3, "type I error study (desk scale)", Some(Duration::from_secs(15 * 60)), type_i_error_desk),
        (4, "field-data substitutes", None, field_substitutes),
        (5, "pivotality", Some(Duration::from_secs(10 * 60)), pivotality),
        (6, "hazard-shape classification", Some(Duration::from_secs(60)), hazard_shapes),
        (7, "numerical analysis", None, numerics),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| outcome(false, format!("panicked: {}", panic_message(&e))));
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = result.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget_note = budget.map_or(String::new(), |b| format!(" / budget {:.0?}", b));
        println!(
            "criterion {id} [{name}]: {} - {} ({elapsed:.2?}{budget_note})",
            if pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn lab_fit() -> Outcome {
    let fit = fit_weibull(&appliance_b_lab()).unwrap();
    let (a, b) = (fit.estimate("alpha").unwrap(), fit.estimate("beta").unwrap());
    let (sa, sb) = (fit.std_error("alpha").unwrap(), fit.std_error("beta").unwrap());
    let pass = fit.converged
        && (a - 529.4).abs() <= 0.5
        && (b - 1.55).abs() <= 0.01
        && (sa - 121.0).abs() <= 2.0
        && (sb - 0.470).abs() <= 0.01;
    outcome(pass, format!("alpha={a:.2} ({sa:.2}), beta={b:.4} ({sb:.4})"))
}

fn planning_values() -> PlanningValues {
    PlanningValues::new(3.0, 3.4, 1.0 / 2.28, 0.452, 0.0341).unwrap()
}

fn optimal_plan() -> Outcome {
    let values = planning_values();
    let constraint = PlanConstraint::type_i(50.0).unwrap();
    let frailty = optimize_plan(&values, &constraint, Criterion::LogQuantile { p: 0.05 }).unwrap();
    let homogeneous = optimize_plan(&values, &constraint, Criterion::WeibullLogQuantile { p: 0.05 }).unwrap();
    let near = |x: f64, y: f64| (x - y).abs() <= 0.01;
    let plan_ok = near(frailty.plan.xi_l, 0.338) && near(frailty.plan.pi, 0.649);
    let sd_ok = (frailty.sd / 3.23 - 1.0).abs() <= 0.05;
    let homog_ok = near(homogeneous.plan.xi_l, 0.419) && near(homogeneous.plan.pi, 0.766);
    outcome(
        plan_ok && sd_ok && homog_ok,
        format!(
            "frailty plan ({:.4}, {:.4}) sd {:.4} [{}]; homogeneous plan ({:.4}, {:.4})",
            frailty.plan.xi_l, frailty.plan.pi, frailty.sd, frailty.convention, homogeneous.plan.xi_l, homogeneous.plan.pi
        ),
    )
}

fn type_i_error_desk() -> Outcome {
    let config = StudyConfig {
        scenarios: vec![Scenario::I],
        betas: vec![1.5],
        field_sizes: vec![2000],
        levels: vec![0.05],
        replications: 500,
        b: 2000,
        ..StudyConfig::default()
    };
    let table = simulation_study(&config).unwrap();
    let ratio = table.get(Scenario::I, 1.5, 2000, 0.05, "ratio").unwrap();
    let lr = table.get(Scenario::I, 1.5, 2000, 0.05, "lr").unwrap();
    let pass = (0.03..=0.08).contains(&ratio.estimate) && lr.estimate > ratio.estimate;
    outcome(
        pass,
        format!(
            "ratio test {:.3} (se {:.3}), LR test {:.3} (se {:.3}), {} replications, {} failed",
            ratio.estimate, ratio.mc_se, lr.estimate, lr.mc_se, ratio.replications, ratio.failed
        ),
    )
}

/// Fraction of replications where every estimate lies within 3 reported
/// standard errors of the truth, per parameter.
fn coverage(hits: &[Vec<bool>]) -> Vec<f64> {
    let n = hits.len() as f64;
    (0..hits[0].len())
        .map(|j| hits.iter().filter(|h| h[j]).count() as f64 / n)
        .collect()
}

fn within_3se(est: &[f64], se: &[f64], truth: &[f64]) -> Vec<bool> {
    est.iter()
        .zip(se)
        .zip(truth)
        .map(|((e, s), t)| s.is_finite() && (e - t).abs() <= 3.0 * s)
        .collect()
}

fn field_substitutes() -> Outcome {
    const REPS: u64 = 200;
    // Burr-XII at the reported field estimates, N = 10^4, Type I with 10% failing.
    let burr = BurrXIIParams::new(298.6, 2.66, 0.0223).unwrap();
    let tau = burr.quantile(0.1).unwrap();
    let burr_hits: Vec<Vec<bool>> = (0..REPS)
        .map(|r| {
            let t = sample(LifetimeDistribution::BurrXii(burr), 10_000, 1000 + r).unwrap();
            let s = CensoredSample::from_lifetimes(t, Censoring::TypeI { censor_time: tau }).unwrap();
            let f = fit_burr12(&s, None).unwrap();
            within_3se(&f.estimates(), &f.std_errors(), &[298.6, 2.66, 0.0223])
        })
        .collect();
    let burr_cov = coverage(&burr_hits);

    // Common-shape model at the reported joint estimates: lab n = 100 Type II
    // at 80 failures, field N = 10^4 Type I with 10% failing.
    let (alpha, beta, lambda, k) = (545.15, 2.28, 385.05, 0.0341);
    let lab_dist = WeibullParams::new(alpha, beta).unwrap();
    let field_dist = BurrXIIParams::new(lambda, beta, k).unwrap();
    let field_tau = field_dist.quantile(0.1).unwrap();
    let joint_hits: Vec<Vec<bool>> = (0..REPS)
        .map(|r| {
            let lt = sample(LifetimeDistribution::Weibull(lab_dist), 100, 5000 + r).unwrap();
            let ft = sample(LifetimeDistribution::BurrXii(field_dist), 10_000, 9000 + r).unwrap();
            let lab = CensoredSample::from_lifetimes(lt, Censoring::TypeII { failures: 80 }).unwrap();
            let field = CensoredSample::from_lifetimes(ft, Censoring::TypeI { censor_time: field_tau }).unwrap();
            let j = fit_frailty_joint(&lab, &field).unwrap();
            within_3se(&j.fit.estimates(), &j.fit.std_errors(), &[alpha, beta, lambda, k])
        })
        .collect();
    let joint_cov = coverage(&joint_hits);

    // Reported log-likelihoods are rounded to 0.1, so the AICs agree to 0.1.
    let aic_w = aic_from(-977.2, 2);
    let aic_b = aic_from(-973.8, 3);
    let aic_ok = (aic_w - 1958.4).abs() <= 0.1 + 1e-9 && (aic_b - 1953.5).abs() <= 0.1 + 1e-9 && aic_from(0.0, 0) == 0.0;
    let mu = (385.05f64 / 545.15).powf(2.28);
    let mu_ok = (mu - 0.452).abs() <= 0.001;
    let cov_ok = burr_cov.iter().chain(&joint_cov).all(|&c| c >= 0.95);
    outcome(
        cov_ok && aic_ok && mu_ok,
        format!(
            "3-SE coverage Burr {:?}, joint {:?}; AIC {aic_w:.1}/{aic_b:.1}; mu identity {mu:.4}",
            burr_cov.iter().map(|c| format!("{c:.3}")).collect::<Vec<_>>(),
            joint_cov.iter().map(|c| format!("{c:.3}")).collect::<Vec<_>>()
        ),
    )
}

/// Ratio estimates from raw data generated at non-unit parameters.
fn raw_ratios(
    lab_n: usize,
    lab_scheme: Censoring,
    field_n: usize,
    field_scheme: Censoring,
    (alpha, beta, k, mu): (f64, f64, f64, f64),
    reps: usize,
    seed: u64,
) -> Vec<f64> {
    let lab_dist = LifetimeDistribution::Weibull(WeibullParams::new(alpha, beta).unwrap());
    let field_dist = LifetimeDistribution::BurrXii(BurrXIIParams::new(alpha * mu.powf(1.0 / beta), beta, k).unwrap());
    (0..reps as u64)
        .map(|i| {
            let mut rng = task_rng(seed, i);
            let lab = CensoredSample::from_lifetimes(lab_dist.sample_with(&mut rng, lab_n).unwrap(), lab_scheme).unwrap();
            let field =
                CensoredSample::from_lifetimes(field_dist.sample_with(&mut rng, field_n).unwrap(), field_scheme).unwrap();
            shape_ratio(&lab, &field, k).unwrap()
        })
        .collect()
}

fn pivotality() -> Outcome {
    const B: usize = 5000;
    let params = (534.0, 1.5, 1.0, 19.0);
    let mut details = Vec::new();
    let mut pass = true;
    let mut compare = |name: &str, lab: SideDesign, field: SideDesign, raw: Vec<f64>, level: f64, seed: u64| {
        let reference = simulate_ratio_distribution(lab, field, params.2, B, seed, Method::FullRefit).unwrap();
        let d = ks_two_sample(&reference.draws, &raw);
        let p = ks_two_sample_p_value(d, B, raw.len());
        pass &= p > level;
        details.push(format!("{name}: KS p={p:.3} (level {level})"));
    };

    // exact pivot: complete lab and field samples
    compare(
        "complete",
        SideDesign::new(10, DesignKind::Complete).unwrap(),
        SideDesign::new(300, DesignKind::Complete).unwrap(),
        raw_ratios(10, Censoring::Complete, 300, Censoring::Complete, params, B, 11),
        0.01,
        12,
    );
    // exact pivot: Type II lab (8 of 10) and field (200 of 2000)
    compare(
        "type II",
        SideDesign::new(10, DesignKind::TypeII { r: 8 }).unwrap(),
        SideDesign::new(2000, DesignKind::TypeII { r: 200 }).unwrap(),
        raw_ratios(10, Censoring::TypeII { failures: 8 }, 2000, Censoring::TypeII { failures: 200 }, params, B, 13),
        0.01,
        14,
    );
    // approximate pivot: Type I field data at tau = 878, N = 2000
    let field_burr = BurrXIIParams::new(534.0 * 19f64.powf(1.0 / 1.5), 1.5, 1.0).unwrap();
    let fraction = field_burr.cdf_at(878.0);
    compare(
        "type I field",
        SideDesign::new(10, DesignKind::TypeII { r: 8 }).unwrap(),
        SideDesign::new(2000, DesignKind::TypeI { fraction }).unwrap(),
        raw_ratios(10, Censoring::TypeII { failures: 8 }, 2000, Censoring::TypeI { censor_time: 878.0 }, params, B, 15),
        0.001,
        16,
    );
    outcome(pass, details.join("; "))
}

trait CdfAt {
    fn cdf_at(&self, t: f64) -> f64;
}

impl CdfAt for BurrXIIParams {
    fn cdf_at(&self, t: f64) -> f64 {
        frailty_alt::distributions::burr12_eval(*self, t, Which::Cdf).unwrap()
    }
}

/// Shape read off the sign changes of the hazard's differences on a fine
/// log grid in `y = (t/alpha)^beta`; returns the label and the grid cells
/// `(t_i, t_i+1)` where the slope changes sign.
fn scan_shape(p: FrailtyFieldParams) -> (ShapeLabel, Vec<(f64, f64)>) {
    const POINTS: usize = 40_000;
    let (lo, hi) = (-12.0f64, 12.0f64);
    let ts: Vec<f64> = (0..POINTS)
        .map(|i| p.alpha * 10f64.powf((lo + (hi - lo) * i as f64 / (POINTS - 1) as f64) / p.beta))
        .collect();
    let h: Vec<f64> = ts.iter().map(|&t| frailty_marginal_eval(p, t, Which::Hazard).unwrap()).collect();
    let mut signs = Vec::new();
    let mut changes = Vec::new();
    for i in 0..POINTS - 1 {
        let d = h[i + 1] - h[i];
        if d == 0.0 {
            continue;
        }
        let s = d > 0.0;
        if let Some(&(prev, j)) = signs.last() {
            if prev != s {
                changes.push((ts[j], ts[i + 1]));
            }
        }
        signs.push((s, i));
    }
    let first_up = signs.first().is_some_and(|s| s.0);
    let label = match (changes.len(), first_up) {
        (0, true) => ShapeLabel::Increasing,
        (0, false) => ShapeLabel::Decreasing,
        (1, true) => ShapeLabel::UpsideDownBathtub,
        (2, true) => ShapeLabel::NShape,
        _ => ShapeLabel::Boundary,
    };
    (label, changes)
}

fn hazard_shapes() -> Outcome {
    let mut rng = task_rng(606, 0);
    let mut cases = Vec::new();
    for i in 0..1000 {
        let alpha = 10f64.powf(rng.random_range(-1.0..3.0));
        let mu = rng.random_range(0.1..20.0);
        let k = rng.random_range(0.05..5.0);
        let (beta, gamma) = match i % 4 {
            0 => (rng.random_range(0.2..=1.0), rng.random_range(0.0..2.0)),
            1 => (rng.random_range(1.1..5.0), 0.0),
            2 => {
                let beta: f64 = rng.random_range(1.1..4.0);
                let edge = k / (4.0 * mu * (beta * beta - beta));
                (beta, edge * rng.random_range(0.05..0.8))
            }
            _ => {
                let beta: f64 = rng.random_range(1.1..5.0);
                let edge = k / (4.0 * mu * (beta * beta - beta));
                (beta, edge * rng.random_range(1.25..20.0))
            }
        };
        cases.push(FrailtyFieldParams::new(alpha, beta, mu, k, gamma).unwrap());
    }
    let mut disagreements = 0;
    let mut counts = [0usize; 4];
    for p in &cases {
        let shape = classify_shape(*p).unwrap();
        let (label, cells) = scan_shape(*p);
        let idx = match shape.label {
            ShapeLabel::Decreasing => 0,
            ShapeLabel::UpsideDownBathtub => 1,
            ShapeLabel::NShape => 2,
            ShapeLabel::Increasing => 3,
            ShapeLabel::Boundary => usize::MAX,
        };
        if idx < 4 {
            counts[idx] += 1;
        }
        let located = shape.turning_points.len() == cells.len()
            && shape
                .turning_points
                .iter()
                .zip(&cells)
                .all(|(t, (a, b))| *t >= a * (1.0 - 1e-9) && *t <= b * (1.0 + 1e-9));
        if label != shape.label || !located {
            disagreements += 1;
        }
    }

    // Constructed tangency cases: beta^2 - beta == k / (4 gamma mu) exactly.
    let boundary = [
        (2.0, 8.0, 1.0, 1.0),
        (2.0, 4.0, 0.5, 1.0),
        (2.0, 16.0, 1.0, 2.0),
        (3.0, 24.0, 1.0, 1.0),
        (3.0, 6.0, 0.25, 1.0),
        (1.5, 3.0, 1.0, 1.0),
        (1.5, 0.75, 0.25, 1.0),
    ];
    let mut boundary_ok = 0;
    for &(beta, k, gamma, mu) in &boundary {
        let p = FrailtyFieldParams::new(3.0, beta, mu, k, gamma).unwrap();
        let shape = classify_shape(p).unwrap();
        let (scan, _) = scan_shape(p);
        let t = shape.turning_points.first().copied().unwrap_or(f64::NAN);
        let h = |x: f64| frailty_marginal_eval(p, x, Which::Hazard).unwrap();
        let e = 1e-4 * t;
        let slope = (h(t + e) - h(t - e)) / (2.0 * e);
        let scale = h(t) / t;
        if shape.label == ShapeLabel::Boundary && scan == ShapeLabel::Increasing && slope.abs() < 1e-6 * scale {
            boundary_ok += 1;
        }
    }
    outcome(
        disagreements == 0 && boundary_ok == boundary.len(),
        format!(
            "{} random points (decreasing/UDB/N/increasing = {counts:?}), {disagreements} disagreements; \
             {boundary_ok}/{} tangency cases",
            cases.len(),
            boundary.len()
        ),
    )
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Central difference of `f` in coordinate `i` of `(v0, v1, sigma)`.
fn fd(f: &dyn Fn(&PlanningValues) -> f64, v: &PlanningValues, i: usize) -> f64 {
    let h = 1e-5 * [v.v0, v.v1, v.sigma][i].abs().max(1.0);
    let shift = |d: f64| {
        let mut w = *v;
        match i {
            0 => w.v0 += d,
            1 => w.v1 += d,
            _ => w.sigma += d,
        }
        w
    };
    (f(&shift(h)) - f(&shift(-h))) / (2.0 * h)
}

fn gradients_ok() -> (bool, String) {
    let mut rng = task_rng(707, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v = PlanningValues::new(
            rng.random_range(1.0..5.0),
            rng.random_range(0.5..5.0),
            rng.random_range(0.2..1.0),
            rng.random_range(0.1..20.0),
            rng.random_range(0.02..5.0),
        )
        .unwrap();
        let p = rng.random_range(0.01..0.9);
        let tau = field_quantile(&v, rng.random_range(0.01..0.9)).unwrap();
        let checks: [(Criterion, Box<dyn Fn(&PlanningValues) -> f64>); 3] = [
            (Criterion::LogQuantile { p }, Box::new(move |w| field_quantile(w, p).unwrap().ln())),
            (Criterion::Quantile { p }, Box::new(move |w| field_quantile(w, p).unwrap())),
            (Criterion::FailureProb { tau }, Box::new(move |w| field_failure_prob(w, tau).unwrap())),
        ];
        for (c, f) in &checks {
            let g = criterion_gradient(&v, *c).unwrap();
            let norm = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for i in 0..3 {
                let num = fd(f.as_ref(), &v, i);
                worst = worst.max((g[i] - num).abs() / norm);
            }
        }
    }
    (worst <= 1e-6, format!("max relative gradient error {worst:.1e}"))
}

/// Per-unit information of a standard SEV observation censored at `zeta`,
/// from the finite-difference Hessian of simulated log-likelihoods. Returns
/// the mean and the Monte-Carlo standard error of each entry.
fn sev_info_simulated(zeta: f64, n: usize, seed: u64) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
    let ll = |z: Option<f64>, m: f64, s: f64| match z {
        Some(z) => {
            let w = (z - m) / s;
            -s.ln() + w - w.exp()
        }
        None => -((zeta - m) / s).exp(),
    };
    let h = 1e-3;
    let mut rng = task_rng(seed, 0);
    let mut sum = [[0.0; 2]; 2];
    let mut sq = [[0.0; 2]; 2];
    for _ in 0..n {
        let e: f64 = Exp1.sample(&mut rng);
        let z = e.ln();
        let obs = (z <= zeta).then_some(z);
        let f = |m: f64, s: f64| ll(obs, m, s);
        let f0 = f(0.0, 1.0);
        let d11 = (f(h, 1.0) - 2.0 * f0 + f(-h, 1.0)) / (h * h);
        let d22 = (f(0.0, 1.0 + h) - 2.0 * f0 + f(0.0, 1.0 - h)) / (h * h);
        let d12 = (f(h, 1.0 + h) - f(h, 1.0 - h) - f(-h, 1.0 + h) + f(-h, 1.0 - h)) / (4.0 * h * h);
        let vals = [[-d11, -d12], [-d12, -d22]];
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += vals[i][j];
                sq[i][j] += vals[i][j] * vals[i][j];
            }
        }
    }
    let nf = n as f64;
    let mut mean = [[0.0; 2]; 2];
    let mut se = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            mean[i][j] = sum[i][j] / nf;
            se[i][j] = ((sq[i][j] / nf - mean[i][j] * mean[i][j]) / nf).sqrt();
        }
    }
    (mean, se)
}

fn numerics() -> Outcome {
    let (grad_ok, grad_note) = gradients_ok();

    let euler: f64 = 0.577_215_664_901_532_9;
    let complete = sev_unit_info(f64::INFINITY).unwrap();
    let closed = [[1.0, 1.0 - euler], [1.0 - euler, std::f64::consts::PI.powi(2) / 6.0 + (1.0 - euler).powi(2)]];
    let closed_ok = (0..2).all(|i| (0..2).all(|j| rel_close(complete[i][j], closed[i][j], 1e-9)));

    let mut sim_ok = true;
    let mut worst_z: f64 = 0.0;
    for (zeta, seed) in [(-1.0, 71), (0.5, 72)] {
        let exact = sev_unit_info(zeta).unwrap();
        let (mean, se) = sev_info_simulated(zeta, 10_000_000, seed);
        for i in 0..2 {
            for j in 0..2 {
                let z = (mean[i][j] - exact[i][j]).abs() / se[i][j];
                worst_z = worst_z.max(z);
                sim_ok &= z <= 3.0;
            }
        }
    }

    // Marginal cdf against lifetimes drawn from the conditional model.
    let params = FrailtyFieldParams::new(100.0, 1.8, 2.0, 0.7, 0.05).unwrap();
    let n = 1_000_000;
    let times = sample_field_time(params.baseline(), GammaFrailtyParams::new(0.7, 2.0, 0.05).unwrap(), n, 73).unwrap();
    let mut marg_ok = true;
    let mut worst_m: f64 = 0.0;
    for t in [20.0, 60.0, 100.0, 200.0, 400.0] {
        let f = frailty_marginal_eval(params, t, Which::Cdf).unwrap();
        let emp = times.iter().filter(|&&x| x <= t).count() as f64 / n as f64;
        let z = (emp - f).abs() / (f * (1.0 - f) / n as f64).sqrt();
        worst_m = worst_m.max(z);
        marg_ok &= z <= 3.0;
    }
    outcome(
        grad_ok && closed_ok && sim_ok && marg_ok,
        format!(
            "{grad_note}; complete-data SEV information {}; simulated SEV information max |z| {worst_z:.2}; \
             marginal cdf max |z| {worst_m:.2}",
            if closed_ok { "matches closed form" } else { "MISMATCH" }
        ),
    )
}
