//! No-reference underwater image quality (UIQM, UCIQE) and detection
//! evaluation (precision, recall, mAP).
//!
//! Image statistics are reduced in sorted order, so flipping or rotating
//! an image leaves every score bit-identical.

mod eval;
mod files;
mod stats;
mod uciqe;
mod uiqm;

use serde::Serialize;

use crate::error::Result;
use crate::optics::PlanarImage;

pub use eval::{
    average_precision, evaluate_detections, rank_order, ClassAp, EvalConfig, EvalResult,
    ImagePredictions, ImageTruths, RankedDetection, DEFAULT_SCORE_THRESHOLD, MAP_THRESHOLDS,
};
pub use files::{
    json_files, parse_predictions, parse_truths, predictions_to_json, read_prediction_dir,
    read_truth_dir, truths_to_json,
};
pub use uciqe::{
    lightness_chroma, uciqe, UciqeScore, CHROMA_WEIGHT, CONTRAST_TAIL, CONTRAST_WEIGHT,
    SATURATION_WEIGHT,
};
pub use uiqm::{
    uicm, uiconm, uiqm, uism, UiqmScore, BLOCK_SIZE, TRIM_FRACTION, UICM_WEIGHT, UICONM_WEIGHT,
    UISM_WEIGHT,
};

/// Both quality scores of one image with their components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityScore {
    pub uiqm: UiqmScore,
    pub uciqe: UciqeScore,
}

/// UIQM and UCIQE of an RGB image in `[0, 1]` (at least 8×8 pixels).
pub fn quality_score(img: &PlanarImage) -> Result<QualityScore> {
    Ok(QualityScore {
        uiqm: uiqm(img)?,
        uciqe: uciqe(img)?,
    })
}
