//! Command-line front end for lab/field frailty analysis and ALT planning.

mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // record the program by name so artifacts do not depend on the install path
    let mut recorded = argv;
    if let Some(first) = recorded.first_mut() {
        *first = "frailty-alt".into();
    }
    match commands::run(cli, &recorded) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, frailty_alt::Error::Usage(_)) { 2 } else { 1 };
            ExitCode::from(code)
        }
    }
}
