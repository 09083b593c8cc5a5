use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use frailty_alt::dataio::{appliance_b_lab, parse_csv, synthetic_field};
use frailty_alt::distributions::FrailtyFieldParams;
use frailty_alt::hazard::{classify_shape, hazard_profile, profile_csv, quantile_log_grid, HazardShape};
use frailty_alt::inference::{
    aic, combine_separate, fit_burr12, fit_field_extended, fit_frailty_joint, fit_weibull, kaplan_meier,
    lr_test, lr_test_boundary, CensoredSample, FitResult, JointFitResult, LrTestResult,
};
use frailty_alt::pivotal::{pivotal_test, simulation_study, Method, Scenario, SideDesign, StudyConfig};
use frailty_alt::planning::{contour_grid, optimize_plan, ContourGrid, Criterion, OptimalPlan, PlanConstraint, PlanningValues};
use frailty_alt::rng::DEFAULT_SEED;
use frailty_alt::{Error, Result};
use serde::Serialize;

use crate::output::{emit, Format, Provenance};

#[derive(Parser, Debug)]
#[command(name = "frailty-alt", version, about = "Lab/field lifetime analysis with gamma frailty and ALT planning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
pub struct Parallel {
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weibull fit of lab data.
    FitLab {
        /// CSV file, or `appliance_b` for the bundled dataset.
        #[arg(long, default_value = "appliance_b")]
        data: String,
        #[command(flatten)]
        output: Output,
    },
    /// Candidate lifetime models for field data, with AIC and nested LR tests.
    FitField {
        /// CSV file, or `synthetic_field` for simulated stand-in data.
        #[arg(long, default_value = "synthetic_field")]
        data: String,
        #[arg(long, value_enum, default_value_t = FieldModel::All)]
        model: FieldModel,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Common-shape fit of lab and field data.
    FitJoint {
        #[arg(long, default_value = "appliance_b")]
        lab: String,
        #[arg(long, default_value = "synthetic_field")]
        field: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte-Carlo ratio test of a common lab/field shape.
    TestPivotal {
        #[arg(long, default_value = "appliance_b")]
        lab: String,
        #[arg(long, default_value = "synthetic_field")]
        field: String,
        /// Reference-distribution size.
        #[arg(long = "B", alias = "b", default_value_t = 5000)]
        b: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        parallel: Parallel,
        #[command(flatten)]
        output: Output,
    },
    /// Likelihood-ratio test of a common lab/field shape.
    TestLr {
        #[arg(long, default_value = "appliance_b")]
        lab: String,
        #[arg(long, default_value = "synthetic_field")]
        field: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Hazard shape of the frailty field model, with a plotting profile.
    HazardShape {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Profile points, log-spaced between two quantiles.
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 0.001)]
        p_lo: f64,
        #[arg(long, default_value_t = 0.999)]
        p_hi: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal two-stress ALT plan.
    PlanAlt {
        #[arg(long, allow_hyphen_values = true)]
        v0: f64,
        #[arg(long, allow_hyphen_values = true)]
        v1: f64,
        /// Weibull shape (sets sigma = 1/beta).
        #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
        beta: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        k: f64,
        /// Common test duration (Type I).
        #[arg(long, conflicts_with = "fail_fraction", required_unless_present = "fail_fraction")]
        censor: Option<f64>,
        /// Failure fraction at which each stress group stops (Type II).
        #[arg(long)]
        fail_fraction: Option<f64>,
        #[arg(long, value_enum, default_value_t = CriterionArg::LogQuantile)]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 0.05)]
        p: f64,
        /// Warranty time for `failure-prob`.
        #[arg(long)]
        tau: Option<f64>,
        /// Total units; omit for per-unit information.
        #[arg(long)]
        n_total: Option<usize>,
        /// Also evaluate a contour grid with this many cells per axis.
        #[arg(long)]
        contour: Option<usize>,
        #[command(flatten)]
        parallel: Parallel,
        #[command(flatten)]
        output: Output,
    },
    /// Size study of the ratio and likelihood-ratio tests.
    SimulateTable1 {
        #[arg(long, default_value_t = 2000)]
        replications: usize,
        #[arg(long = "B", alias = "b", default_value_t = 5000)]
        b: usize,
        #[arg(long, value_delimiter = ',', default_value = "I,II,III")]
        scenarios: Vec<ScenarioArg>,
        #[arg(long, value_delimiter = ',', default_value = "1.5,2.0")]
        betas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2000,5000")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.01")]
        levels: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        parallel: Parallel,
        #[command(flatten)]
        output: Output,
    },
    /// Kaplan–Meier estimate with pointwise 95% bands.
    Km {
        #[arg(long, default_value = "appliance_b")]
        data: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldModel {
    Weibull,
    LogLogistic,
    Burr,
    Extended,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    FullRefit,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    LogQuantile,
    Quantile,
    FailureProb,
    WeibullLogQuantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
pub enum ScenarioArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
}

fn load(source: &str, seed: u64) -> Result<CensoredSample> {
    match source {
        "appliance_b" => Ok(appliance_b_lab()),
        "synthetic_field" => synthetic_field(seed),
        path => {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| Error::Io(format!("cannot read {path}: {e}")))?;
            parse_csv(&text)
        }
    }
}

fn uses_seed(sources: &[&str]) -> bool {
    sources.contains(&"synthetic_field")
}

fn set_jobs(p: &Parallel) -> Result<()> {
    if let Some(jobs) = p.jobs {
        if jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::Usage(format!("cannot size worker pool: {e}")))?;
    }
    Ok(())
}

fn fit_csv(fit: &FitResult) -> String {
    let mut s = String::from("parameter,estimate,std_error\n");
    for p in &fit.params {
        let se = if p.std_error.is_finite() { p.std_error.to_string() } else { String::new() };
        s.push_str(&format!("{},{},{se}\n", p.name, p.estimate));
    }
    s.push_str(&format!("loglik,{},\n", fit.loglik));
    s
}

fn require_json(format: Format, what: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::Usage(format!("{what} has no CSV form; use --format json")));
    }
    Ok(())
}

#[derive(Serialize)]
struct NamedFit {
    name: &'static str,
    aic: f64,
    fit: FitResult,
}

#[derive(Serialize)]
struct FieldReport {
    fits: Vec<NamedFit>,
    /// Burr-XII against log-logistic (`k = 1`).
    k_equals_one: Option<LrTestResult>,
    /// Extended model against Burr-XII (`gamma_tilde = 0`, boundary null).
    gamma_zero: Option<LrTestResult>,
    synthetic_data: bool,
}

#[derive(Serialize)]
struct LrReport {
    separate: FitResult,
    joint: JointFitResult,
    test: LrTestResult,
}

#[derive(Serialize)]
struct HazardReport {
    params: FrailtyFieldParams,
    shape: HazardShape,
    profile: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct PlanReport {
    optimum: OptimalPlan,
    contour: Option<ContourGrid>,
}

pub fn run(cli: Cli, argv: &[String]) -> Result<()> {
    match cli.command {
        Command::FitLab { data, output } => {
            let fit = fit_weibull(&load(&data, DEFAULT_SEED)?)?;
            let prov = Provenance { argv, seed: None };
            let text = match output.format {
                Format::Json => prov.json(&fit),
                Format::Csv => prov.csv(&fit_csv(&fit)),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::FitField { data, model, seed, output } => {
            let sample = load(&data, seed)?;
            let prov = Provenance { argv, seed: uses_seed(&[&data]).then_some(seed) };
            let named = |name, fit: FitResult| NamedFit { name, aic: aic(&fit), fit };
            let single = match model {
                FieldModel::Weibull => Some(named("weibull", fit_weibull(&sample)?)),
                FieldModel::LogLogistic => Some(named("log_logistic", fit_burr12(&sample, Some(1.0))?)),
                FieldModel::Burr => Some(named("burr_xii", fit_burr12(&sample, None)?)),
                FieldModel::Extended => Some(named("extended", fit_field_extended(&sample)?)),
                FieldModel::All => None,
            };
            if let Some(one) = single {
                let text = match output.format {
                    Format::Json => prov.json(&one),
                    Format::Csv => prov.csv(&fit_csv(&one.fit)),
                };
                return emit(output.out.as_deref(), &text);
            }
            require_json(output.format, "fit-field --model all")?;
            let weibull = fit_weibull(&sample)?;
            let loglogistic = fit_burr12(&sample, Some(1.0))?;
            let burr = fit_burr12(&sample, None)?;
            let extended = fit_field_extended(&sample)?;
            let report = FieldReport {
                k_equals_one: lr_test(&burr, &loglogistic, 1).ok(),
                gamma_zero: lr_test_boundary(&extended, &burr).ok(),
                fits: vec![
                    named("weibull", weibull),
                    named("log_logistic", loglogistic),
                    named("burr_xii", burr),
                    named("extended", extended),
                ],
                synthetic_data: data == "synthetic_field",
            };
            emit(output.out.as_deref(), &prov.json(&report))
        }
        Command::FitJoint { lab, field, seed, output } => {
            let joint = fit_frailty_joint(&load(&lab, seed)?, &load(&field, seed)?)?;
            let prov = Provenance { argv, seed: uses_seed(&[&lab, &field]).then_some(seed) };
            let text = match output.format {
                Format::Json => prov.json(&joint),
                Format::Csv => {
                    let mut body = fit_csv(&joint.fit);
                    body.push_str(&format!("mu,{},{}\n", joint.mu, joint.mu_std_error));
                    prov.csv(&body)
                }
            };
            emit(output.out.as_deref(), &text)
        }
        Command::TestPivotal { lab, field, b, method, seed, parallel, output } => {
            set_jobs(&parallel)?;
            require_json(output.format, "test-pivotal")?;
            let (lab_s, field_s) = (load(&lab, seed)?, load(&field, seed)?);
            let lab_fit = fit_weibull(&lab_s)?;
            let field_fit = fit_burr12(&field_s, None)?;
            let (bl, bw, k) = (lab_fit.estimates()[1], field_fit.estimates()[1], field_fit.estimates()[2]);
            let se_w = field_fit.std_errors()[1];
            let method = match method {
                MethodArg::Auto => Method::auto(field_s.len(), bw, se_w),
                MethodArg::FullRefit => Method::FullRefit,
                MethodArg::NormalApprox => Method::NormalApprox { beta_w_hat: bw, beta_w_se: se_w },
            };
            let result = pivotal_test(
                bl,
                bw,
                SideDesign::from_sample(&lab_s)?,
                SideDesign::from_sample(&field_s)?,
                k,
                b,
                seed,
                method,
            )?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            emit(output.out.as_deref(), &Provenance { argv, seed: Some(seed) }.json(&result))
        }
        Command::TestLr { lab, field, seed, output } => {
            require_json(output.format, "test-lr")?;
            let (lab_s, field_s) = (load(&lab, seed)?, load(&field, seed)?);
            let separate = combine_separate(&fit_weibull(&lab_s)?, &fit_burr12(&field_s, None)?);
            let joint = fit_frailty_joint(&lab_s, &field_s)?;
            let test = lr_test(&separate, &joint.fit, 1)?;
            let prov = Provenance { argv, seed: uses_seed(&[&lab, &field]).then_some(seed) };
            emit(output.out.as_deref(), &prov.json(&LrReport { separate, joint, test }))
        }
        Command::HazardShape { alpha, beta, mu, k, gamma, points, p_lo, p_hi, output } => {
            let params = FrailtyFieldParams::new(alpha, beta, mu, k, gamma)?;
            let shape = classify_shape(params)?;
            let grid = quantile_log_grid(params, p_lo, p_hi, points)?;
            let profile = hazard_profile(params, &grid)?;
            let prov = Provenance { argv, seed: None };
            let text = match output.format {
                Format::Json => prov.json(&HazardReport { params, shape, profile }),
                Format::Csv => prov.csv(&profile_csv(&profile)),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::PlanAlt {
            v0,
            v1,
            beta,
            sigma,
            mu,
            k,
            censor,
            fail_fraction,
            criterion,
            p,
            tau,
            n_total,
            contour,
            parallel,
            output,
        } => {
            set_jobs(&parallel)?;
            let sigma = match (beta, sigma) {
                (Some(b), None) if b > 0.0 => 1.0 / b,
                (None, Some(s)) => s,
                _ => return Err(Error::Usage("give a positive --beta or --sigma".into())),
            };
            let values = PlanningValues::new(v0, v1, sigma, mu, k)?;
            let mut constraint = match (censor, fail_fraction) {
                (Some(c), None) => PlanConstraint::type_i(c)?,
                (None, Some(q)) => PlanConstraint::type_ii(q)?,
                _ => return Err(Error::Usage("give exactly one of --censor or --fail-fraction".into())),
            };
            if let Some(n) = n_total {
                constraint = constraint.with_units(n);
            }
            let criterion = match criterion {
                CriterionArg::LogQuantile => Criterion::LogQuantile { p },
                CriterionArg::Quantile => Criterion::Quantile { p },
                CriterionArg::WeibullLogQuantile => Criterion::WeibullLogQuantile { p },
                CriterionArg::FailureProb => Criterion::FailureProb {
                    tau: tau.ok_or_else(|| Error::Usage("failure-prob needs --tau".into()))?,
                },
            };
            let optimum = optimize_plan(&values, &constraint, criterion)?;
            let contour = contour.map(|r| contour_grid(&values, &constraint, criterion, r)).transpose()?;
            let prov = Provenance { argv, seed: None };
            let text = match output.format {
                Format::Json => prov.json(&PlanReport { optimum, contour }),
                Format::Csv => match contour {
                    Some(grid) => prov.csv(&grid.to_csv()),
                    None => prov.csv(&format!(
                        "xi_L,pi,sd\n{},{},{}\n",
                        optimum.plan.xi_l, optimum.plan.pi, optimum.sd
                    )),
                },
            };
            emit(output.out.as_deref(), &text)
        }
        Command::SimulateTable1 { replications, b, scenarios, betas, sizes, levels, seed, parallel, output } => {
            set_jobs(&parallel)?;
            let config = StudyConfig {
                scenarios: scenarios
                    .iter()
                    .map(|s| match s {
                        ScenarioArg::I => Scenario::I,
                        ScenarioArg::II => Scenario::II,
                        ScenarioArg::III => Scenario::III,
                    })
                    .collect(),
                betas,
                field_sizes: sizes,
                levels,
                replications,
                b,
                seed,
                ..StudyConfig::default()
            };
            let table = simulation_study(&config)?;
            let prov = Provenance { argv, seed: Some(seed) };
            let text = match output.format {
                Format::Json => prov.json(&table),
                Format::Csv => prov.csv(&table.to_csv()),
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Km { data, seed, output } => {
            let sample = load(&data, seed)?;
            let km = kaplan_meier(&sample);
            let prov = Provenance { argv, seed: uses_seed(&[&data]).then_some(seed) };
            let text = match output.format {
                Format::Json => prov.json(&km),
                Format::Csv => prov.csv(&km.to_csv()),
            };
            emit(output.out.as_deref(), &text)
        }
    }
}

