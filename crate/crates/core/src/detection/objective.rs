use crate::error::{check_range, Result};

/// Exponents of the task-alignment score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for AlignmentParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 6.0,
        }
    }
}

impl AlignmentParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_range("alpha", alpha, 0.0, f64::MAX)?;
        check_range("beta", beta, 0.0, f64::MAX)?;
        Ok(Self { alpha, beta })
    }
}

/// `s^α · u^β`, coupling classification score `s` and localisation
/// quality `u` (an IoU).
pub fn task_alignment(score: f64, overlap: f64, params: AlignmentParams) -> Result<f64> {
    check_range("score", score, 0.0, 1.0)?;
    check_range("iou", overlap, 0.0, 1.0)?;
    Ok(score.powf(params.alpha) * overlap.powf(params.beta))
}

/// Weights of the detection objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectWeights {
    pub cls: f64,
    pub boxes: f64,
    /// Weight of the CIoU aspect-ratio term.
    pub ciou_aspect: f64,
}

impl Default for DetectWeights {
    fn default() -> Self {
        Self {
            cls: 0.5,
            boxes: 7.5,
            ciou_aspect: 1.0,
        }
    }
}

impl DetectWeights {
    pub fn new(cls: f64, boxes: f64, ciou_aspect: f64) -> Result<Self> {
        check_range("w_cls", cls, 0.0, f64::MAX)?;
        check_range("w_box", boxes, 0.0, f64::MAX)?;
        check_range("ciou_alpha", ciou_aspect, 0.0, f64::MAX)?;
        Ok(Self {
            cls,
            boxes,
            ciou_aspect,
        })
    }
}

/// `w_cls·L_cls + w_box·L_CIoU`.
pub fn detection_loss(cls_loss: f64, box_loss: f64, weights: DetectWeights) -> f64 {
    weights.cls * cls_loss + weights.boxes * box_loss
}

/// `α·L_enhance + (1 − α)·L_obj`, with `α ∈ [0, 1]`. Training on synthetic
/// images only uses `α = 1`.
pub fn total_loss(enhance: f64, objective: f64, alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, 0.0, 1.0)?;
    Ok(alpha * enhance + (1.0 - alpha) * objective)
}
