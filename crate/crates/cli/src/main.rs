use std::process::ExitCode;

use clap::Parser;
use mtfib_cli::{execute, exit_code, render, Cli, EXIT_SEMANTIC};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(report) => {
            print!("{}", render(&report, cli.format));
            if report.failed() {
                eprintln!("error: self-check failed");
                return ExitCode::from(EXIT_SEMANTIC as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
