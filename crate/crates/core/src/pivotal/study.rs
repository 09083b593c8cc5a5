use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::design::SideDesign;
use super::reference::{simulate_ratio_distribution, Method};
use super::two_sided_p_value;
use crate::distributions::sampling::{burr_draw, weibull_draw};
use crate::distributions::{BurrXIIParams, WeibullParams};
use crate::error::{Error, Result};
use crate::inference::{fit_burr12, fit_weibull, joint_from_fits, lr_test_loglik, CensoredSample, Censoring};
use crate::rng::{child_seed, task_rng, DEFAULT_SEED};

/// Censoring combination of the size study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Lab Type II, field Type II.
    I,
    /// Lab Type II, field Type I.
    II,
    /// Lab Type I, field Type I.
    III,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Scenario::I => "I",
            Scenario::II => "II",
            Scenario::III => "III",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub scenarios: Vec<Scenario>,
    pub betas: Vec<f64>,
    pub field_sizes: Vec<usize>,
    pub levels: Vec<f64>,
    pub replications: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub seed: u64,
    pub alpha: f64,
    pub k: f64,
    pub mu: f64,
    pub lab_n: usize,
    pub lab_failures: usize,
    pub lab_censor_time: f64,
    pub field_censor_time: f64,
    pub field_fail_fraction: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            scenarios: vec![Scenario::I, Scenario::II, Scenario::III],
            betas: vec![1.5, 2.0],
            field_sizes: vec![2000, 5000],
            levels: vec![0.10, 0.05, 0.01],
            replications: 2000,
            b: 5000,
            seed: DEFAULT_SEED,
            alpha: 534.0,
            k: 1.0,
            mu: 19.0,
            lab_n: 10,
            lab_failures: 8,
            lab_censor_time: 733.0,
            field_censor_time: 878.0,
            field_fail_fraction: 0.1,
        }
    }
}

/// Estimated rejection rate of one test at one nominal level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyCell {
    pub scenario: Scenario,
    pub beta: f64,
    pub n: usize,
    pub level: f64,
    /// `"ratio"` or `"lr"`.
    pub test: String,
    pub estimate: f64,
    pub mc_se: f64,
    pub replications: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyTable {
    pub config: StudyConfig,
    pub cells: Vec<StudyCell>,
}

impl StudyTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario,beta,N,level,test,estimate,mc_se,replications,failed\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6},{},{}\n",
                c.scenario, c.beta, c.n, c.level, c.test, c.estimate, c.mc_se, c.replications, c.failed
            ));
        }
        out
    }

    pub fn get(&self, scenario: Scenario, beta: f64, n: usize, level: f64, test: &str) -> Option<&StudyCell> {
        self.cells
            .iter()
            .find(|c| c.scenario == scenario && c.beta == beta && c.n == n && c.level == level && c.test == test)
    }
}

struct Replicate {
    ratio_p: f64,
    lr_p: f64,
}

/// Size study of the ratio test and the likelihood-ratio test under the
/// common-shape null.
pub fn simulation_study(config: &StudyConfig) -> Result<StudyTable> {
    if config.replications == 0 || config.b == 0 {
        return Err(Error::Usage("replications and B must be positive".into()));
    }
    let mut cells = Vec::new();
    let mut cell_index = 0u64;
    for &scenario in &config.scenarios {
        for &beta in &config.betas {
            for &n in &config.field_sizes {
                let cell_seed = child_seed(config.seed, cell_index);
                cell_index += 1;
                let reps: Vec<Option<Replicate>> = (0..config.replications)
                    .into_par_iter()
                    .map(|i| replicate(config, scenario, beta, n, cell_seed, i as u64).ok())
                    .collect();
                let ok: Vec<&Replicate> = reps.iter().flatten().collect();
                let failed = reps.len() - ok.len();
                for &level in &config.levels {
                    for (test, pick) in [("ratio", 0), ("lr", 1)] {
                        let used = ok.len();
                        let rejections = ok
                            .iter()
                            .filter(|r| if pick == 0 { r.ratio_p } else { r.lr_p } <= level)
                            .count();
                        let est = if used == 0 { f64::NAN } else { rejections as f64 / used as f64 };
                        cells.push(StudyCell {
                            scenario,
                            beta,
                            n,
                            level,
                            test: test.to_string(),
                            estimate: est,
                            mc_se: (est * (1.0 - est) / used as f64).sqrt(),
                            replications: used,
                            failed,
                        });
                    }
                }
            }
        }
    }
    Ok(StudyTable { config: config.clone(), cells })
}

fn replicate(
    config: &StudyConfig,
    scenario: Scenario,
    beta: f64,
    n: usize,
    cell_seed: u64,
    index: u64,
) -> Result<Replicate> {
    let mut rng = task_rng(cell_seed, index);
    let weibull = WeibullParams::new(config.alpha, beta)?;
    let burr = BurrXIIParams::new(config.alpha * config.mu.powf(1.0 / beta), beta, config.k)?;
    let lab_times: Vec<f64> = (0..config.lab_n).map(|_| weibull_draw(&mut rng, &weibull)).collect();
    let field_times: Vec<f64> = (0..n).map(|_| burr_draw(&mut rng, &burr)).collect();
    let lab_scheme = match scenario {
        Scenario::I | Scenario::II => Censoring::TypeII { failures: config.lab_failures },
        Scenario::III => Censoring::TypeI { censor_time: config.lab_censor_time },
    };
    let field_scheme = match scenario {
        Scenario::I => {
            Censoring::TypeII { failures: ((config.field_fail_fraction * n as f64).round() as usize).max(1) }
        }
        Scenario::II | Scenario::III => Censoring::TypeI { censor_time: config.field_censor_time },
    };
    let lab = CensoredSample::from_lifetimes(lab_times, lab_scheme)?;
    let field = CensoredSample::from_lifetimes(field_times, field_scheme)?;

    let lab_fit = fit_weibull(&lab)?;
    let field_fit = fit_burr12(&field, None)?;
    let joint = joint_from_fits(&lab, &field, &lab_fit, &field_fit);
    // A lightly censored field sample often pushes k to infinity; the shape
    // and its standard error then come from the limiting Weibull fit.
    let (field_loglik, beta_w, se_w) = if field_fit.converged {
        (field_fit.loglik, field_fit.estimates()[1], field_fit.std_errors()[1])
    } else {
        let w = fit_weibull(&field)?;
        (w.loglik.max(field_fit.loglik), w.estimates()[1], w.std_errors()[1])
    };
    let lr = lr_test_loglik(lab_fit.loglik + field_loglik, joint.fit.loglik, 1)?;

    let beta_l = lab_fit.estimates()[1];
    let method = Method::NormalApprox { beta_w_hat: beta_w, beta_w_se: se_w };
    let reference = simulate_ratio_distribution(
        SideDesign::from_sample(&lab)?,
        SideDesign::from_sample(&field)?,
        field_fit.estimates()[2],
        config.b,
        child_seed(cell_seed, index),
        method,
    )?;
    let ratio_p = two_sided_p_value(&reference.sorted(), beta_l / beta_w);
    Ok(Replicate { ratio_p, lr_p: lr.p_value })
}
