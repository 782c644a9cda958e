use std::path::{Path, PathBuf};

use aquasim::baseline::{estimate_maps, BaselineParams};
use aquasim::io::{encode_png8, read_image, write_bytes};
use aquasim::optics::{invert_to_clean, PlanarImage, TransmissionMap};
use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{pool, print_config, CliError};

/// Map extensions tried, in order, when looking up `<id>_B` and `<id>_t`.
const MAP_EXTENSIONS: [&str; 3] = ["fmap", "pfm", "png"];

#[derive(Debug, Args)]
pub struct EnhanceArgs {
    /// An image file, or a directory whose `*_uw.<ext>` images are enhanced.
    #[arg(long)]
    input: PathBuf,
    /// Output directory for `<id>_enhanced.png`.
    #[arg(long)]
    out: PathBuf,
    /// Directory holding `<id>_B.*` and `<id>_t.*` maps.
    #[arg(long, conflicts_with = "estimate")]
    maps_dir: Option<PathBuf>,
    /// Estimate B and t with the built-in dark-channel baseline.
    #[arg(long)]
    estimate: bool,
    /// Lower bound applied to t before inversion.
    #[arg(long, default_value_t = 0.1)]
    t_floor: f64,
    /// Image extension collected from an input directory.
    #[arg(long, default_value = "png")]
    input_ext: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

/// Record id of an input image: its file stem without a trailing `_uw`.
fn image_id(path: &Path) -> Result<String, CliError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| CliError::usage(format!("{}: no usable file name", path.display())))?;
    Ok(stem.strip_suffix("_uw").unwrap_or(stem).to_string())
}

fn collect_inputs(args: &EnhanceArgs) -> Result<Vec<PathBuf>, CliError> {
    if !args.input.is_dir() {
        return Ok(vec![args.input.clone()]);
    }
    let ext = args.input_ext.to_ascii_lowercase();
    let mut out = Vec::new();
    let entries = std::fs::read_dir(&args.input)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.input.display())))?;
    for entry in entries {
        let path = entry.map_err(CliError::failed)?.path();
        let ext_ok = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case(&ext));
        let uw = path
            .file_stem()
            .and_then(|s| s.to_str())
            .is_some_and(|s| s.ends_with("_uw"));
        if path.is_file() && ext_ok && uw {
            out.push(path);
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(CliError::usage(format!(
            "{}: no *_uw.{ext} images found",
            args.input.display()
        )));
    }
    Ok(out)
}

fn find_map(dir: &Path, id: &str, name: &str) -> Result<PathBuf, CliError> {
    MAP_EXTENSIONS
        .iter()
        .map(|ext| dir.join(format!("{id}_{name}.{ext}")))
        .find(|p| p.is_file())
        .ok_or_else(|| CliError::failed(format!("{id}: no {name} map in {}", dir.display())))
}

fn enhance_one(path: &Path, args: &EnhanceArgs) -> Result<PathBuf, CliError> {
    let id = image_id(path)?;
    let observed = read_image(path)?;
    if observed.channels() != 3 {
        return Err(CliError::failed(format!(
            "{}: expected an RGB image",
            path.display()
        )));
    }
    let (background, transmission): (PlanarImage, TransmissionMap) = match &args.maps_dir {
        Some(dir) => {
            let b = read_image(&find_map(dir, &id, "B")?)?;
            let t = read_image(&find_map(dir, &id, "t")?)?;
            (b, TransmissionMap::from_estimate(&t, args.t_floor)?)
        }
        None => {
            let est = estimate_maps(&observed, &BaselineParams::default(), args.t_floor)?;
            (est.background, est.transmission)
        }
    };
    let clean = invert_to_clean(&observed, &background, &transmission, args.t_floor)?;
    let out = args.out.join(format!("{id}_enhanced.png"));
    write_bytes(&out, &encode_png8(&clean.clamped_unit())?)?;
    Ok(out)
}

pub fn run(args: EnhanceArgs) -> Result<(), CliError> {
    if args.maps_dir.is_none() && !args.estimate {
        return Err(CliError::usage(
            "B and t maps are missing: pass --maps-dir or --estimate",
        ));
    }
    if !(args.t_floor > 0.0 && args.t_floor <= 1.0) {
        return Err(CliError::usage(format!(
            "--t-floor {} outside (0, 1]",
            args.t_floor
        )));
    }
    let params = BaselineParams::default();
    print_config(&json!({
        "command": "enhance",
        "input": args.input,
        "out": args.out,
        "maps": match &args.maps_dir {
            Some(d) => json!({"dir": d}),
            None => json!({
                "estimate": "dark-channel baseline",
                "patch_radius": params.patch_radius,
                "omega": params.omega,
                "brightest_fraction": params.brightest_fraction,
                "quantile": params.quantile,
            }),
        },
        "t_floor": args.t_floor,
        "input_ext": args.input_ext,
        "workers": args.workers,
    }));

    let inputs = collect_inputs(&args)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::failed(format!("{}: {e}", args.out.display())))?;
    let results: Vec<Result<PathBuf, CliError>> =
        pool(args.workers)?.install(|| inputs.par_iter().map(|p| enhance_one(p, &args)).collect());

    let mut failures = 0;
    for (input, result) in inputs.iter().zip(&results) {
        match result {
            Ok(out) => println!("ok   {} -> {}", input.display(), out.display()),
            Err(e) => {
                failures += 1;
                println!("FAIL {}: {e}", input.display());
            }
        }
    }
    println!("images {} ok, {failures} failed", inputs.len() - failures);
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::failed(format!("{failures} image(s) failed")))
    }
}
