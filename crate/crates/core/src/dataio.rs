//! Lifetime data files and bundled datasets.
//!
//! Files are `time,status` CSV (status 1 = failure, 0 = right-censored) with
//! an optional header and optional `#` metadata lines:
//!
//! ```text
//! # format_version: 1
//! # scheme: type_ii 8
//! time,status
//! 99,1
//! ```
//!
//! The scheme line is one of `complete`, `type_i <censor time>`,
//! `type_ii <failures>` or `arbitrary`.

use crate::distributions::{sample, BurrXIIParams, LifetimeDistribution};
use crate::error::{Error, Result};
use crate::inference::{CensoredSample, Censoring, Observation};
use crate::FORMAT_VERSION;

const APPLIANCE_B_LAB: &str = include_str!("../data/appliance_b_lab.csv");

/// Accelerated-test lifetimes of 10 units of "Appliance B"; the test stopped
/// at the 8th failure.
pub fn appliance_b_lab() -> CensoredSample {
    parse_csv(APPLIANCE_B_LAB).expect("bundled dataset is valid")
}

/// The bundled lab file exactly as shipped.
pub fn appliance_b_lab_csv() -> &'static str {
    APPLIANCE_B_LAB
}

/// Field units and Burr-XII parameters of the synthetic field stand-in.
pub const SYNTHETIC_FIELD_UNITS: usize = 4708;
pub const SYNTHETIC_FIELD_PARAMS: (f64, f64, f64) = (298.6, 2.66, 0.0223);
/// Expected number of returns within the warranty window.
pub const SYNTHETIC_FIELD_RETURNS: f64 = 93.0;

/// Synthetic warranty-return data: 4708 Burr-XII(298.6, 2.66, 0.0223)
/// lifetimes, Type I censored where about 93 returns are expected. This is
/// simulated, not observed, data.
pub fn synthetic_field(seed: u64) -> Result<CensoredSample> {
    let (lambda, beta, k) = SYNTHETIC_FIELD_PARAMS;
    let dist = BurrXIIParams::new(lambda, beta, k)?;
    let window = dist.quantile(SYNTHETIC_FIELD_RETURNS / SYNTHETIC_FIELD_UNITS as f64)?;
    let censor_time = (window * 10.0).round() / 10.0;
    let times = sample(LifetimeDistribution::BurrXii(dist), SYNTHETIC_FIELD_UNITS, seed)?;
    CensoredSample::from_lifetimes(times, Censoring::TypeI { censor_time })
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_scheme(text: &str, line: usize) -> Result<Censoring> {
    let mut parts = text.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let arg = parts.next();
    let scheme = match (kind, arg) {
        ("complete", None) => Censoring::Complete,
        ("arbitrary", None) => Censoring::Arbitrary,
        ("type_i", Some(a)) => Censoring::TypeI {
            censor_time: a.parse().map_err(|_| parse_error(line, format!("bad censor time `{a}`")))?,
        },
        ("type_ii", Some(a)) => Censoring::TypeII {
            failures: a.parse().map_err(|_| parse_error(line, format!("bad failure count `{a}`")))?,
        },
        _ => return Err(parse_error(line, format!("unknown scheme `{text}`"))),
    };
    if parts.next().is_some() {
        return Err(parse_error(line, format!("unknown scheme `{text}`")));
    }
    Ok(scheme)
}

/// Scheme implied by the data alone: complete, Type I when every censored
/// unit shares one time, otherwise arbitrary.
fn infer_scheme(obs: &[Observation]) -> Censoring {
    let mut censored = obs.iter().filter(|o| !o.failed).map(|o| o.time);
    match censored.next() {
        None => Censoring::Complete,
        Some(t) if censored.all(|c| c == t) => Censoring::TypeI { censor_time: t },
        Some(_) => Censoring::Arbitrary,
    }
}

pub fn parse_csv(text: &str) -> Result<CensoredSample> {
    let mut scheme = None;
    let mut obs = Vec::new();
    let mut seen_row = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((key, value)) = meta.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "scheme" => scheme = Some(parse_scheme(value, line_no)?),
                    "format_version" => {
                        let v: u32 = value
                            .parse()
                            .map_err(|_| parse_error(line_no, format!("bad format_version `{value}`")))?;
                        if v > FORMAT_VERSION {
                            return Err(parse_error(line_no, format!("unsupported format_version {v}")));
                        }
                    }
                    _ => {}
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_row && obs.is_empty() && fields == ["time", "status"] {
            seen_row = true;
            continue;
        }
        seen_row = true;
        let [time, status] = fields[..] else {
            return Err(parse_error(line_no, format!("expected 2 fields, found {}", fields.len())));
        };
        let time: f64 = time.parse().map_err(|_| parse_error(line_no, format!("bad time `{time}`")))?;
        let failed = match status {
            "1" => true,
            "0" => false,
            other => return Err(parse_error(line_no, format!("status must be 0 or 1, found `{other}`"))),
        };
        if !(time.is_finite() && time > 0.0) {
            return Err(Error::Validation(format!("line {line_no}: time must be positive, found {time}")));
        }
        obs.push(Observation { time, failed });
    }
    if obs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let scheme = scheme.unwrap_or_else(|| infer_scheme(&obs));
    CensoredSample::new(obs, scheme)
}

pub fn write_csv(sample: &CensoredSample) -> String {
    let scheme = match sample.scheme() {
        Censoring::Complete => "complete".to_string(),
        Censoring::Arbitrary => "arbitrary".to_string(),
        Censoring::TypeI { censor_time } => format!("type_i {censor_time}"),
        Censoring::TypeII { failures } => format!("type_ii {failures}"),
    };
    let mut out = format!("# format_version: {FORMAT_VERSION}\n# scheme: {scheme}\ntime,status\n");
    for o in sample.observations() {
        out.push_str(&format!("{},{}\n", o.time, u8::from(o.failed)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lab_data() {
        let s = appliance_b_lab();
        assert_eq!(s.n_events(), 8);
        assert_eq!(s.len(), 10);
        assert_eq!(s.max_time(), 687.0);
        assert_eq!(s.scheme(), Censoring::TypeII { failures: 8 });
        assert_eq!(write_csv(&s), APPLIANCE_B_LAB);
    }

    #[test]
    fn header_is_optional() {
        let a = parse_csv("time,status\n99,1\n687,0").unwrap();
        let b = parse_csv("99,1\n687,0\n").unwrap();
        assert_eq!(a, b);
        assert_eq!((a.n_events(), a.n_censored()), (1, 1));
    }

    #[test]
    fn error_lines() {
        assert_eq!(parse_csv("99,x").unwrap_err(), parse_error(1, "status must be 0 or 1, found `x`"));
        assert!(matches!(parse_csv("time,status\n99,x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_csv("1,1\n2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_csv("-1,1"), Err(Error::Validation(_))));
    }

    #[test]
    fn synthetic_field_has_about_93_returns() {
        let s = synthetic_field(1).unwrap();
        assert_eq!(s.len(), SYNTHETIC_FIELD_UNITS);
        assert!((60..130).contains(&s.n_events()), "{}", s.n_events());
    }
}
