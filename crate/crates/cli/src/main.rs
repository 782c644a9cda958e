//! `aquasim`: synthesize, enhance, evaluate and check underwater imaging
//! data from the command line.
//!
//! Exit codes: 0 success, 1 data or processing failure, 2 usage or
//! configuration error.

mod enhance;
mod error;
mod evaluate;
mod losscheck;
mod synth;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::LevelFilter;

use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "aquasim",
    version,
    about = "Underwater image synthesis, enhancement and evaluation"
)]
struct Cli {
    /// Log progress details to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degrade clean RGB-D pairs into a paired underwater dataset.
    Synth(synth::SynthArgs),
    /// Invert the imaging model with supplied or estimated maps.
    Enhance(enhance::EnhanceArgs),
    /// Score detections or image quality.
    #[command(subcommand)]
    Evaluate(evaluate::EvaluateCommand),
    /// Evaluate a loss on files, optionally checking its gradient.
    Losscheck(losscheck::LosscheckArgs),
    /// Recompute the checksums listed in a dataset manifest.
    Verify(verify::VerifyArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth(args) => synth::run(args),
        Command::Enhance(args) => enhance::run(args),
        Command::Evaluate(cmd) => evaluate::run(cmd),
        Command::Losscheck(args) => losscheck::run(args),
        Command::Verify(args) => verify::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            LevelFilter::Info
        } else {
            LevelFilter::Warn
        })
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
