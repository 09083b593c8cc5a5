use std::path::Path;

use frailty_alt::{Error, Result, FORMAT_VERSION};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format_version: u32,
    tool_version: &'static str,
    command: &'a [String],
    seed: Option<u64>,
    result: &'a T,
}

pub struct Provenance<'a> {
    pub argv: &'a [String],
    pub seed: Option<u64>,
}

impl Provenance<'_> {
    pub fn json<T: Serialize>(&self, result: &T) -> String {
        let env = Envelope {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: self.argv,
            seed: self.seed,
            result,
        };
        let mut s = serde_json::to_string_pretty(&env).expect("results always serialize");
        s.push('\n');
        s
    }

    pub fn csv(&self, body: &str) -> String {
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!(
            "# format_version: {FORMAT_VERSION}\n# tool_version: {}\n# command: {}\n# seed: {seed}\n{body}",
            env!("CARGO_PKG_VERSION"),
            self.argv.join(" "),
        )
    }
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
