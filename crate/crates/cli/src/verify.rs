use std::path::PathBuf;

use aquasim::synth::verify_dataset;
use clap::Args;
use serde_json::json;

use crate::error::{print_config, CliError};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Dataset directory containing `manifest.json`.
    dir: PathBuf,
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    print_config(&json!({ "command": "verify", "dir": args.dir }));
    let report = verify_dataset(&args.dir)?;
    for f in &report.failures {
        println!("FAIL {} {}: {}", f.id, f.file, f.reason);
    }
    println!(
        "verified {} files in {} records",
        report.files, report.records
    );
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::failed(format!(
            "{} file(s) failed verification",
            report.failures.len()
        )))
    }
}
