use std::process::ExitCode;

use clap::Parser;
use mipblend_core::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("mipblend: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
