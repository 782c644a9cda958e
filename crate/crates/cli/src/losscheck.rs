use std::path::{Path, PathBuf};

use aquasim::detection::{
    bce_classification_loss, ciou_loss, parse_box_list, parse_value_list, BoundingBox,
    DetectWeights,
};
use aquasim::gradcheck::{check, GradCheck};
use aquasim::io::read_image;
use aquasim::losses::{
    background_loss, enhance_loss, l1_loss, log_robust_loss, normal_loss, physical_loss,
    sobel_gradient_loss, transmission_loss, EnhanceMode, EnhanceWeights, LossReport, PhysicalMaps,
    PRED,
};
use aquasim::PlanarImage;
use clap::{Args, ValueEnum};
use serde_json::json;

use crate::error::{print_config, CliError};

type Result<T> = aquasim::Result<T>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum LossName {
    L1,
    LogRobust,
    SobelGradient,
    Normal,
    Background,
    Transmission,
    Physical,
    Enhance,
    Bce,
    Ciou,
}

impl LossName {
    fn usage(self, real: bool) -> &'static str {
        match self {
            LossName::Physical => "I J B t",
            LossName::Enhance if real => "I J B t",
            LossName::Enhance => "I J B t J_gt B_gt t_gt",
            LossName::Bce => "logits.json targets.json",
            LossName::Ciou => "pred_boxes.json truth_boxes.json",
            _ => "pred target",
        }
    }

    fn file_count(self, real: bool) -> usize {
        self.usage(real).split(' ').count()
    }
}

#[derive(Debug, Args)]
pub struct LosscheckArgs {
    /// Loss to evaluate.
    loss: LossName,
    /// Input files, in the order the loss expects (maps or JSON).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Also compare the analytic gradient with central finite differences.
    #[arg(long)]
    grad_check: bool,
    /// Weight of the physical-consistency term in `enhance`.
    #[arg(long = "cI", default_value_t = 0.5)]
    c_i: f64,
    /// Evaluate `enhance` in real-image mode (no ground truth).
    #[arg(long)]
    real: bool,
    /// Largest number of elements per input probed by `--grad-check`.
    #[arg(long, default_value_t = 256)]
    max_elements: usize,
}

/// A loss evaluated on inputs, reporting gradients per differentiable input.
struct Evaluation {
    value: f64,
    gradients: Vec<(String, Vec<f64>)>,
    check: Option<GradCheck>,
}

fn read(path: &Path) -> Result<PlanarImage> {
    read_image(path)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| aquasim::Error::io(path, e))
}

fn with_data(like: &PlanarImage, data: &[f64]) -> Result<PlanarImage> {
    PlanarImage::new(like.height(), like.width(), like.channels(), data.to_vec())
}

fn map_gradients(report: &LossReport) -> Vec<(String, Vec<f64>)> {
    report
        .gradients
        .iter()
        .map(|(k, g)| (k.clone(), g.data().to_vec()))
        .collect()
}

type MapLoss = fn(&PlanarImage, &PlanarImage) -> Result<LossReport>;

fn pair_loss(f: MapLoss, files: &[PathBuf], args: &LosscheckArgs) -> Result<Evaluation> {
    let pred = read(&files[0])?;
    let target = read(&files[1])?;
    let report = f(&pred, &target)?;
    let check = match args.grad_check {
        false => None,
        true => {
            let g = report
                .gradient(PRED)
                .expect("single-input loss reports pred");
            Some(check(pred.data(), g.data(), args.max_elements, |x| {
                Ok(f(&with_data(&pred, x)?, &target)?.value)
            })?)
        }
    };
    Ok(Evaluation {
        value: report.value,
        gradients: map_gradients(&report),
        check,
    })
}

/// Checks the gradient of `f` with respect to each of J, B and t in turn.
fn check_maps(
    maps: &PhysicalMaps,
    report: &LossReport,
    max_elements: usize,
    f: impl Fn(&PhysicalMaps) -> Result<f64>,
) -> Result<GradCheck> {
    let mut total = GradCheck::default();
    for name in ["J", "B", "t"] {
        let base = match name {
            "J" => &maps.clean,
            "B" => &maps.background,
            _ => &maps.transmission,
        };
        let analytic = report
            .gradient(name)
            .map(|g| g.data().to_vec())
            .unwrap_or_else(|| vec![0.0; base.len()]);
        let r = check(base.data(), &analytic, max_elements, |x| {
            let mut probe = maps.clone();
            let img = with_data(base, x)?;
            match name {
                "J" => probe.clean = img,
                "B" => probe.background = img,
                _ => probe.transmission = img,
            }
            f(&probe)
        })?;
        total.merge(r);
    }
    Ok(total)
}

fn read_maps(files: &[PathBuf]) -> Result<PhysicalMaps> {
    Ok(PhysicalMaps {
        clean: read(&files[0])?,
        background: read(&files[1])?,
        transmission: read(&files[2])?,
    })
}

fn maps_loss(name: LossName, files: &[PathBuf], args: &LosscheckArgs) -> Result<Evaluation> {
    let observed = read(&files[0])?;
    let pred = read_maps(&files[1..4])?;
    let truth = match (name, args.real) {
        (LossName::Enhance, false) => Some(read_maps(&files[4..7])?),
        _ => None,
    };
    let weights = EnhanceWeights::new(args.c_i)?;
    let eval = |maps: &PhysicalMaps| -> Result<LossReport> {
        match name {
            LossName::Physical => physical_loss(&observed, maps),
            _ => {
                let mode = if args.real {
                    EnhanceMode::Real
                } else {
                    EnhanceMode::Simulated
                };
                enhance_loss(maps, truth.as_ref(), &observed, weights, mode)
            }
        }
    };
    let report = eval(&pred)?;
    let check = match args.grad_check {
        false => None,
        true => Some(check_maps(&pred, &report, args.max_elements, |m| {
            Ok(eval(m)?.value)
        })?),
    };
    Ok(Evaluation {
        value: report.value,
        gradients: map_gradients(&report),
        check,
    })
}

fn bce(files: &[PathBuf], args: &LosscheckArgs) -> Result<Evaluation> {
    let logits = parse_value_list(&read_bytes(&files[0])?)?;
    let targets = parse_value_list(&read_bytes(&files[1])?)?;
    let loss = bce_classification_loss(&logits, &targets)?;
    let check = match args.grad_check {
        false => None,
        true => Some(check(&logits, &loss.gradient, args.max_elements, |x| {
            Ok(bce_classification_loss(x, &targets)?.value)
        })?),
    };
    Ok(Evaluation {
        value: loss.value,
        gradients: vec![("logits".into(), loss.gradient)],
        check,
    })
}

/// Mean CIoU over index-paired boxes, with its gradient on the flattened
/// predicted coordinates.
fn mean_ciou(pred: &[f64], truth: &[BoundingBox], weight: f64) -> Result<(f64, Vec<f64>)> {
    let n = truth.len() as f64;
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(pred.len());
    for (p, t) in pred.chunks_exact(4).zip(truth) {
        let b = BoundingBox::new(p[0], p[1], p[2], p[3])?;
        let l = ciou_loss(&b, t, weight)?;
        value += l.value / n;
        grad.extend(l.gradient.iter().map(|g| g / n));
    }
    Ok((value, grad))
}

fn ciou(files: &[PathBuf], args: &LosscheckArgs) -> Result<Evaluation> {
    let pred = parse_box_list(&read_bytes(&files[0])?)?;
    let truth = parse_box_list(&read_bytes(&files[1])?)?;
    if pred.len() != truth.len() || pred.is_empty() {
        return Err(aquasim::Error::Shape(format!(
            "{} predicted vs {} truth boxes; need equal, non-empty lists",
            pred.len(),
            truth.len()
        )));
    }
    let weight = DetectWeights::default().ciou_aspect;
    let flat: Vec<f64> = pred.iter().flat_map(|b| b.coords()).collect();
    let (value, grad) = mean_ciou(&flat, &truth, weight)?;
    let check = match args.grad_check {
        false => None,
        true => Some(check(&flat, &grad, args.max_elements, |x| {
            Ok(mean_ciou(x, &truth, weight)?.0)
        })?),
    };
    Ok(Evaluation {
        value,
        gradients: vec![("pred".into(), grad)],
        check,
    })
}

fn evaluate(args: &LosscheckArgs) -> Result<Evaluation> {
    let files = &args.files;
    match args.loss {
        LossName::L1 => pair_loss(l1_loss, files, args),
        LossName::LogRobust => pair_loss(log_robust_loss, files, args),
        LossName::SobelGradient => pair_loss(sobel_gradient_loss, files, args),
        LossName::Normal => pair_loss(normal_loss, files, args),
        LossName::Background => pair_loss(background_loss, files, args),
        LossName::Transmission => pair_loss(transmission_loss, files, args),
        LossName::Physical | LossName::Enhance => maps_loss(args.loss, files, args),
        LossName::Bce => bce(files, args),
        LossName::Ciou => ciou(files, args),
    }
}

pub fn run(args: LosscheckArgs) -> std::result::Result<(), CliError> {
    let expected = args.loss.file_count(args.real);
    if args.files.len() != expected {
        return Err(CliError::usage(format!(
            "{} expects {expected} files ({}), got {}",
            args.loss
                .to_possible_value()
                .expect("no skipped variants")
                .get_name(),
            args.loss.usage(args.real),
            args.files.len()
        )));
    }
    if args.real && args.loss != LossName::Enhance {
        return Err(CliError::usage("--real applies only to the enhance loss"));
    }
    if !(args.c_i.is_finite() && args.c_i >= 0.0) {
        return Err(CliError::usage(format!("--cI {} must be >= 0", args.c_i)));
    }
    if args.max_elements == 0 {
        return Err(CliError::usage("--max-elements must be positive"));
    }
    print_config(&json!({
        "command": "losscheck",
        "loss": args.loss.to_possible_value().expect("no skipped variants").get_name(),
        "files": args.files,
        "grad_check": args.grad_check,
        "cI": args.c_i,
        "real": args.real,
        "max_elements": args.max_elements,
    }));

    let eval = evaluate(&args)?;
    println!("value {:.9}", eval.value);
    for (name, g) in &eval.gradients {
        let l1: f64 = g.iter().map(|v| v.abs()).sum();
        println!("grad_l1 {name} {l1:.9}");
    }
    if let Some(c) = eval.check {
        println!(
            "grad_check max_rel {:.3e} checked {} skipped {}",
            c.max_relative, c.checked, c.skipped
        );
    }
    Ok(())
}
