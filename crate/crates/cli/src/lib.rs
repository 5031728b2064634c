//! Command-line front end for `sigforge-core`: every computation becomes a
//! [`ResultRecord`] printed as a table, JSON or CSV.

pub mod commands;
pub mod error;
pub mod input;
pub mod record;

use std::io::Write;

use clap::Parser;

pub use commands::Cli;
pub use error::{exit, CliError, CliResult};
pub use record::{Format, Grid, ResultRecord};

pub const PRECISION_ENV: &str = "SIGFORGE_PRECISION_BITS";

fn apply_precision() -> CliResult<()> {
    if let Ok(raw) = std::env::var(PRECISION_ENV) {
        let bits: u32 = raw.trim().parse().map_err(|_| CliError::Precision(raw.clone()))?;
        if bits == 0 {
            return Err(CliError::Precision(raw));
        }
        sigforge_core::cyclo::set_initial_precision_bits(bits);
    }
    Ok(())
}

pub fn run_cli(cli: &Cli) -> CliResult<String> {
    apply_precision()?;
    let mut record = commands::execute(&cli.command)?;
    if !cli.no_timestamp {
        record = record.stamped();
    }
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Table
    };
    record.render(format)
}

/// Parse the process arguments, run, print, and return the exit code.
pub fn main_exit_code() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match run_cli(&cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Ok(()) => exit::OK,
                Err(_) => exit::IO,
            }
        }
        Err(e) => {
            eprintln!("sigforge: {e}");
            e.exit_code()
        }
    }
}
