use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use aquasim::io::read_image;
use aquasim::metrics::{
    evaluate_detections, quality_score, read_prediction_dir, read_truth_dir, EvalConfig,
    EvalResult, QualityScore, MAP_THRESHOLDS,
};
use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{pool, print_config, CliError};

#[derive(Debug, Subcommand)]
pub enum EvaluateCommand {
    /// Precision, recall and mAP of per-image detection JSON files.
    Detections(DetectionArgs),
    /// UIQM and UCIQE of every image in a directory.
    Quality(QualityArgs),
}

#[derive(Debug, Args)]
pub struct DetectionArgs {
    /// Directory of prediction JSON files.
    #[arg(long)]
    pred: PathBuf,
    /// Directory of ground-truth JSON files.
    #[arg(long)]
    truth: PathBuf,
    /// IoU thresholds averaged into mAP50-95c.
    #[arg(long, value_delimiter = ',', default_values_t = MAP_THRESHOLDS.to_vec())]
    iou_thresholds: Vec<f64>,
    /// Minimum score of detections counted for precision and recall.
    #[arg(long, default_value_t = aquasim::metrics::DEFAULT_SCORE_THRESHOLD)]
    score_threshold: f64,
    /// Also write the full report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QualityArgs {
    /// Directory of RGB images (`.png`, `.fmap` or `.pfm`).
    #[arg(long)]
    images: PathBuf,
    /// Also write the per-image scores as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

pub fn run(cmd: EvaluateCommand) -> Result<(), CliError> {
    match cmd {
        EvaluateCommand::Detections(args) => detections(args),
        EvaluateCommand::Quality(args) => quality(args),
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(CliError::failed)?;
    bytes.push(b'\n');
    aquasim::io::write_bytes(path, &bytes)?;
    println!("report {}", path.display());
    Ok(())
}

fn print_eval(r: &EvalResult) {
    println!("precision  {:.3}", r.precision);
    println!("recall     {:.3}", r.recall);
    println!("mAP50      {:.3}", r.map50);
    println!("mAP50-95c  {:.3}", r.map50_95c);
    let header: Vec<String> = r
        .iou_thresholds
        .iter()
        .map(|t| format!("AP@{t:.2}"))
        .collect();
    println!(
        "{:>6} {:>7} {:>7} {:>7} {}",
        "class",
        "truths",
        "dets",
        "AP50",
        header.join(" ")
    );
    for c in &r.per_class {
        let aps: Vec<String> =
            c.ap.iter()
                .zip(&header)
                .map(|(v, h)| format!("{v:>w$.3}", w = h.len()))
                .collect();
        println!(
            "{:>6} {:>7} {:>7} {:>7.3} {}",
            c.class_id,
            c.truths,
            c.detections,
            c.ap50,
            aps.join(" ")
        );
    }
    if r.unknown_class_detections > 0 {
        println!("unknown-class detections {}", r.unknown_class_detections);
    }
}

fn detections(args: DetectionArgs) -> Result<(), CliError> {
    let config = EvalConfig {
        iou_thresholds: args.iou_thresholds.clone(),
        score_threshold: args.score_threshold,
    };
    config.validate().map_err(CliError::usage)?;
    print_config(&json!({
        "command": "evaluate detections",
        "pred": args.pred,
        "truth": args.truth,
        "iou_thresholds": config.iou_thresholds,
        "score_threshold": config.score_threshold,
        "json": args.json,
    }));
    let preds = read_prediction_dir(&args.pred)?;
    let truths = read_truth_dir(&args.truth)?;

    let pred_ids: BTreeSet<&str> = preds.iter().map(|p| p.image_id.as_str()).collect();
    let truth_ids: BTreeSet<&str> = truths.iter().map(|t| t.image_id.as_str()).collect();
    if pred_ids != truth_ids {
        for id in truth_ids.difference(&pred_ids) {
            println!("missing predictions for image {id}");
        }
        for id in pred_ids.difference(&truth_ids) {
            println!("missing ground truth for image {id}");
        }
        return Err(CliError::failed(
            "prediction and ground-truth image_id sets differ",
        ));
    }

    let result = evaluate_detections(&preds, &truths, &config)?;
    print_eval(&result);
    if let Some(path) = &args.json {
        write_json(path, &result)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ImageQuality {
    image: String,
    #[serde(flatten)]
    score: QualityScore,
}

#[derive(Debug, Serialize)]
struct QualityReport {
    images: Vec<ImageQuality>,
    mean_uiqm: f64,
    mean_uciqe: f64,
}

fn image_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| CliError::usage(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(CliError::failed)?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("png" | "fmap" | "pfm")) {
            out.push(path);
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(CliError::usage(format!(
            "{}: no images found",
            dir.display()
        )));
    }
    Ok(out)
}

fn quality(args: QualityArgs) -> Result<(), CliError> {
    print_config(&json!({
        "command": "evaluate quality",
        "images": args.images,
        "json": args.json,
        "workers": args.workers,
    }));
    let files = image_files(&args.images)?;
    let scores: Vec<Result<QualityScore, CliError>> = pool(args.workers)?.install(|| {
        files
            .par_iter()
            .map(|p| Ok(quality_score(&read_image(p)?)?))
            .collect()
    });

    println!(
        "{:<32} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "image", "UIQM", "UICM", "UISM", "UIConM", "UCIQE"
    );
    let mut images = Vec::new();
    let mut failures = 0;
    for (path, score) in files.iter().zip(scores) {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        match score {
            Ok(s) => {
                println!(
                    "{:<32} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                    name, s.uiqm.uiqm, s.uiqm.uicm, s.uiqm.uism, s.uiqm.uiconm, s.uciqe.uciqe
                );
                images.push(ImageQuality {
                    image: name,
                    score: s,
                });
            }
            Err(e) => {
                failures += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
    let n = images.len().max(1) as f64;
    let report = QualityReport {
        mean_uiqm: images.iter().map(|i| i.score.uiqm.uiqm).sum::<f64>() / n,
        mean_uciqe: images.iter().map(|i| i.score.uciqe.uciqe).sum::<f64>() / n,
        images,
    };
    println!(
        "{:<32} {:>9.4} {:>39} {:>9.4}",
        "mean", report.mean_uiqm, "", report.mean_uciqe
    );
    if let Some(path) = &args.json {
        write_json(path, &report)?;
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(CliError::failed(format!("{failures} image(s) failed")))
    }
}
