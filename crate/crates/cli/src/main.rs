//! `svfield`: scan singular-value fields, locate their extrema and run checks
//! for scenario files.

mod args;
mod commands;
mod manifest;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SVFIELD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("SVFIELD_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Scan(a) => commands::scan(&a),
        Command::Extrema(a) => commands::extrema(&a),
        Command::Verify(a) => commands::verify(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("svfield: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
