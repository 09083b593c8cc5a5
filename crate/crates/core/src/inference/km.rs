use serde::{Deserialize, Serialize};

use super::sample::CensoredSample;
use crate::stats::Z_975;

/// One step of the product-limit estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmStep {
    pub time: f64,
    pub at_risk: usize,
    pub events: usize,
    pub survival: f64,
    /// Greenwood variance of the survival estimate.
    pub variance: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KaplanMeier {
    pub steps: Vec<KmStep>,
}

/// Kaplan–Meier estimate with Greenwood variance and 95% log(-log) bands.
/// Failures tied with censorings are taken to occur first.
pub fn kaplan_meier(sample: &CensoredSample) -> KaplanMeier {
    let mut obs = sample.observations().to_vec();
    obs.sort_by(|a, b| a.time.total_cmp(&b.time));
    let mut at_risk = obs.len();
    let mut surv = 1.0;
    let mut green = 0.0;
    let mut steps = Vec::new();
    let mut i = 0;
    while i < obs.len() {
        let t = obs[i].time;
        let mut events = 0;
        let mut leaving = 0;
        while i < obs.len() && obs[i].time == t {
            events += obs[i].failed as usize;
            leaving += 1;
            i += 1;
        }
        if events > 0 {
            let (n, d) = (at_risk as f64, events as f64);
            surv *= 1.0 - d / n;
            if at_risk > events {
                green += d / (n * (n - d));
            }
            let variance = surv * surv * green;
            let (lower, upper) = loglog_band(surv, green);
            steps.push(KmStep { time: t, at_risk, events, survival: surv, variance, lower, upper });
        }
        at_risk -= leaving;
    }
    KaplanMeier { steps }
}

fn loglog_band(s: f64, green: f64) -> (f64, f64) {
    if s <= 0.0 || s >= 1.0 || green <= 0.0 {
        return (s, s);
    }
    let ls = s.ln();
    let half = Z_975 * green.sqrt() / ls.abs();
    (s.powf(half.exp()), s.powf((-half).exp()))
}

impl KaplanMeier {
    /// Right-continuous survival estimate at `t`.
    pub fn survival_at(&self, t: f64) -> f64 {
        self.steps.iter().take_while(|s| s.time <= t).last().map_or(1.0, |s| s.survival)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,at_risk,events,survival,variance,lower,upper\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                s.time, s.at_risk, s.events, s.survival, s.variance, s.lower, s.upper
            ));
        }
        out
    }
}
