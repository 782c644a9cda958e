use std::collections::BTreeMap;
use std::path::PathBuf;

use aquasim::io::MapFormat;
use aquasim::synth::{discover_inputs, generate_dataset, DatasetOptions, SamplerConfig};
use aquasim::WaterType;
use clap::Args;
use serde_json::json;

use crate::error::{print_config, CliError};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Listing file (`image<TAB>depth` per line) or a directory with
    /// `rgb/` and `depth/` subdirectories.
    #[arg(long)]
    input: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict sampling to these water types (repeat or comma-separate).
    #[arg(long = "water-type", value_delimiter = ',')]
    water_types: Vec<String>,
    /// Pin a scene parameter, e.g. `D=10` or `E_S=0.8,0.9,1`.
    #[arg(long = "fix", value_name = "KEY=VALUE")]
    fixes: Vec<String>,
    /// Lower bound of the sampled water depth D, in meters.
    #[arg(long, default_value_t = 5.0)]
    depth_min: f64,
    /// Upper bound of the sampled water depth D, in meters.
    #[arg(long, default_value_t = 20.0)]
    depth_max: f64,
    /// Depth file encoding: `mm16` or `meters-float`.
    #[arg(long, default_value = "mm16")]
    depth_format: String,
    /// Encoding of the B and t maps: `fmap`, `pfm` or `png16`.
    #[arg(long, default_value = "fmap")]
    map_format: String,
    /// Also write lossless `.fmap` copies of the underwater and clean images.
    #[arg(long)]
    float_export: bool,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn map_format_name(f: MapFormat) -> &'static str {
    match f {
        MapFormat::Fmap => "fmap",
        MapFormat::Pfm => "pfm",
        MapFormat::Png16 => "png16",
    }
}

fn build(args: &SynthArgs) -> Result<(SamplerConfig, DatasetOptions), CliError> {
    let mut config = SamplerConfig::new(args.seed);
    if !args.water_types.is_empty() {
        let mut types: Vec<WaterType> = args
            .water_types
            .iter()
            .map(|s| s.trim().parse::<WaterType>())
            .collect::<Result<_, _>>()
            .map_err(CliError::usage)?;
        types.sort_by_key(|w| WaterType::ALL.iter().position(|a| a == w));
        types.dedup();
        config.water_types = types;
    }
    config.depth_range = (args.depth_min, args.depth_max);
    for fix in &args.fixes {
        config.overrides.set(fix).map_err(CliError::usage)?;
    }
    config.validate().map_err(CliError::usage)?;
    let options = DatasetOptions {
        map_format: args.map_format.parse().map_err(CliError::usage)?,
        float_export: args.float_export,
        depth_encoding: args.depth_format.parse().map_err(CliError::usage)?,
        workers: args.workers,
    };
    Ok((config, options))
}

fn overrides_json(config: &SamplerConfig) -> BTreeMap<&'static str, serde_json::Value> {
    let o = &config.overrides;
    let mut m = BTreeMap::new();
    if let Some(w) = o.water {
        m.insert("water", json!(w.name()));
    }
    if let Some(v) = o.depth_m {
        m.insert("D", json!(v));
    }
    if let Some(v) = o.surface_light {
        m.insert("E_S", json!(v));
    }
    if let Some(v) = o.artificial_peak {
        m.insert("E_art", json!(v));
    }
    if let Some(v) = o.light_center {
        m.insert("center", json!(v));
    }
    if let Some(v) = o.sigma {
        m.insert("sigma", json!(v));
    }
    if let Some(v) = o.omega_a {
        m.insert("omega_a", json!(v));
    }
    if let Some(v) = o.kappa {
        m.insert("kappa", json!(v));
    }
    m
}

pub fn run(args: SynthArgs) -> Result<(), CliError> {
    let (config, options) = build(&args)?;
    print_config(&json!({
        "command": "synth",
        "input": args.input,
        "out": args.out,
        "seed": config.seed,
        "water_types": config.water_types.iter().map(|w| w.name()).collect::<Vec<_>>(),
        "depth_range": [config.depth_range.0, config.depth_range.1],
        "fix": overrides_json(&config),
        "depth_format": options.depth_encoding.name(),
        "map_format": map_format_name(options.map_format),
        "float_export": options.float_export,
        "workers": options.workers,
    }));

    let inputs = discover_inputs(&args.input).map_err(CliError::usage)?;
    if inputs.is_empty() {
        return Err(CliError::usage(format!(
            "{}: no input records",
            args.input.display()
        )));
    }
    let report = generate_dataset(&inputs, &config, &args.out, &options)?;
    let failed: BTreeMap<&str, &str> = report
        .failures
        .iter()
        .map(|f| (f.id.as_str(), f.error.as_str()))
        .collect();
    for input in &inputs {
        match failed.get(input.id.as_str()) {
            Some(err) => println!("FAIL {}: {err}", input.id),
            None => println!("ok   {}", input.id),
        }
    }
    println!("manifest {}", report.manifest_path.display());
    println!(
        "records {} ok, {} failed",
        report.manifest.records.len(),
        report.failures.len()
    );
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::failed(format!(
            "{} record(s) failed",
            report.failures.len()
        )))
    }
}
