use std::path::PathBuf;
use std::process::ExitCode;

use catstat_core::Error;
use clap::{Parser, Subcommand};
use serde::Serialize;

mod commands;
mod output;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "catstat", version, about = "Pattern statistics on Catalan families of permutations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; relative paths are resolved against CATSTAT_OUT_DIR when set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Weight enumerators Q_n from a functional recurrence.
    Wenum(commands::WenumArgs),
    /// Factorial, raw, central and standardized moments.
    Moments(commands::MomentsArgs),
    /// Total occurrences A_p(n) of any pattern over AV132(n).
    Average(commands::AverageArgs),
    /// Bona-class census of patterns of length k.
    Census(commands::CensusArgs),
    /// Guess a recurrence, algebraic equation or closed form for a sequence file.
    Guess(commands::GuessArgs),
    /// Limits of standardized moments and an abnormality verdict.
    Abnormal(commands::AbnormalArgs),
    /// Brute-force cross-checks.
    Oracle {
        #[command(subcommand)]
        action: commands::OracleAction,
    },
}

/// Exit codes: 0 success, 1 internal failure, 2 usage, 3 guess not found.
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_FOUND: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        Error::Usage(_) | Error::Config(_) | Error::Parse(_) | Error::Degenerate { .. } => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, status) = match commands::run(&cli.command) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("catstat: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let rendered = match result.render(cli.format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("catstat: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = output::write_atomic(&output::resolve(path), &rendered) {
                eprintln!("catstat: {e}");
                return ExitCode::from(exit_code(&e));
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(status)
}
