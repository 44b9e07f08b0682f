//! The `mtfib` command line: argument parsing, dispatch and exit codes.

pub mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mtfib_core::Error;

use crate::commands::{CorpusOptions, GbsOptions};
use crate::report::Report;

/// Input could not be parsed.
pub const EXIT_PARSE: i32 = 2;
/// Input parsed but is not a valid instance, or a self-check failed.
pub const EXIT_SEMANTIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mtfib",
    version,
    about = "Fibrations of mapping tori of polynomially growing free group automorphisms"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Presentation, hierarchy, edge elements and the sphere arrangement.
    Analyze { file: PathBuf },
    /// Classifies a character: the rank of its kernel, or not in Σ(G).
    Fiber {
        file: PathBuf,
        /// Values on every generator, e.g. "x1=0,x2=0,t=1".
        #[arg(long)]
        phi: String,
        /// Also compute the rank from the Alexander polynomial and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Alexander polynomial relative to a character.
    Alexander {
        file: PathBuf,
        #[arg(long)]
        phi: String,
    },
    /// Normals of Σ(G)^c and membership of the given characters.
    Sigma {
        file: PathBuf,
        /// May be repeated.
        #[arg(long)]
        phi: Vec<String>,
    },
    /// Center, κ, ε and admissible fibration parameters of a GBS group.
    Gbs {
        file: PathBuf,
        /// Build the fibration with multiplier p and certify it.
        #[arg(long)]
        enumerate: Option<u64>,
        /// Largest k and n in the admissibility table.
        #[arg(long, default_value_t = 12)]
        bound: u64,
        /// Value of enumerated characters on stable letters.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        stable_value: i64,
    },
    /// Abelianization, least unipotent power and a growth estimate.
    Growth {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        iterations: usize,
    },
    /// Random triangular automorphisms checked against the Alexander oracle.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        /// Write each instance as an input file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn execute(command: &Command) -> mtfib_core::Result<Report> {
    match command {
        Command::Analyze { file } => commands::analyze(file),
        Command::Fiber { file, phi, oracle } => commands::fiber(file, phi, *oracle),
        Command::Alexander { file, phi } => commands::alexander(file, phi),
        Command::Sigma { file, phi } => commands::sigma(file, phi),
        Command::Gbs {
            file,
            enumerate,
            bound,
            stable_value,
        } => commands::gbs(
            file,
            &GbsOptions {
                enumerate: *enumerate,
                bound: *bound,
                stable_value: *stable_value,
            },
        ),
        Command::Growth { file, iterations } => commands::growth(file, *iterations),
        Command::Corpus {
            seed,
            count,
            max_rank,
            out,
        } => commands::corpus(&CorpusOptions {
            seed: *seed,
            count: *count,
            max_rank: *max_rank,
            out: out.clone(),
        }),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        _ => EXIT_SEMANTIC,
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_string(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let parse = Error::Parse {
            line: 1,
            column: 1,
            message: "x".into(),
        };
        assert_eq!(exit_code(&parse), EXIT_PARSE);
        assert_eq!(exit_code(&Error::AscendingHnn), EXIT_SEMANTIC);
    }

    #[test]
    fn global_format_flag_after_subcommand() {
        let cli = Cli::parse_from(["mtfib", "growth", "f.txt", "--format", "json"]);
        assert_eq!(cli.format, Format::Json);
        assert!(matches!(
            cli.command,
            Command::Growth { iterations: 12, .. }
        ));
    }

    #[test]
    fn negative_stable_value() {
        let cli = Cli::parse_from(["mtfib", "gbs", "f.txt", "--stable-value", "-2"]);
        assert!(matches!(
            cli.command,
            Command::Gbs {
                stable_value: -2,
                ..
            }
        ));
    }
}
