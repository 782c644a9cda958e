use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::optics::{forward_model, PlanarImage};

use super::{l1_loss, log_robust_loss, normal_loss, sign, sobel_gradient_loss, LossReport, PRED};

pub const GRAD_J: &str = "J";
pub const GRAD_B: &str = "B";
pub const GRAD_T: &str = "t";

/// The three physical maps a decomposition predicts (or its ground truth).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalMaps {
    pub clean: PlanarImage,
    pub background: PlanarImage,
    pub transmission: PlanarImage,
}

impl PhysicalMaps {
    fn ensure_consistent(&self, what: &str) -> Result<()> {
        self.clean.ensure_same_shape(&self.background, what)?;
        self.clean.ensure_same_shape(&self.transmission, what)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhanceWeights {
    /// Weight of the physical-consistency term.
    pub c_i: f64,
}

impl Default for EnhanceWeights {
    fn default() -> Self {
        Self { c_i: 0.5 }
    }
}

impl EnhanceWeights {
    pub fn new(c_i: f64) -> Result<Self> {
        if !(c_i.is_finite() && c_i >= 0.0) {
            return Err(Error::Domain(format!("c_I = {c_i} must be >= 0")));
        }
        Ok(Self { c_i })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnhanceMode {
    /// Synthetic data: ground truth for every map is available.
    Simulated,
    /// Real captures: only the observation supervises the prediction.
    Real,
}

/// Log-robust + Sobel-gradient + surface-normal loss. Used for both the
/// background light and the transmission map.
pub fn background_loss(pred: &PlanarImage, target: &PlanarImage) -> Result<LossReport> {
    let mut total = LossReport::zero();
    total.accumulate(&log_robust_loss(pred, target)?, 1.0);
    total.accumulate(&sobel_gradient_loss(pred, target)?, 1.0);
    total.accumulate(&normal_loss(pred, target)?, 1.0);
    Ok(total)
}

/// Same composition as [`background_loss`], applied to transmission maps.
pub fn transmission_loss(pred: &PlanarImage, target: &PlanarImage) -> Result<LossReport> {
    background_loss(pred, target)
}

/// Mean L1 between the observation and the image re-rendered from the
/// predicted maps, `Ĩ = J·t + B·(1 − t)`. Gradients are keyed `J`, `B`, `t`.
pub fn physical_loss(observed: &PlanarImage, pred: &PhysicalMaps) -> Result<LossReport> {
    pred.ensure_consistent("physical_loss")?;
    observed.ensure_same_shape(&pred.clean, "physical_loss")?;
    let n = observed.len();
    let nf = n as f64;
    let (j, b, t) = (
        pred.clean.data(),
        pred.background.data(),
        pred.transmission.data(),
    );

    let mut sum = 0.0;
    let mut gj = Vec::with_capacity(n);
    let mut gb = Vec::with_capacity(n);
    let mut gt = Vec::with_capacity(n);
    for i in 0..n {
        let rendered = forward_model(j[i], b[i], t[i]);
        let r = observed.data()[i] - rendered;
        sum += r.abs();
        let up = -sign(r) / nf;
        gj.push(up * t[i]);
        gb.push(up * (1.0 - t[i]));
        gt.push(up * (j[i] - b[i]));
    }

    let (h, w, ch) = (observed.height(), observed.width(), observed.channels());
    let mut gradients = BTreeMap::new();
    for (name, g) in [(GRAD_J, gj), (GRAD_B, gb), (GRAD_T, gt)] {
        gradients.insert(name.to_string(), PlanarImage::new(h, w, ch, g)?);
    }
    Ok(LossReport {
        value: sum / nf,
        gradients,
    })
}

fn rekey(report: LossReport, name: &str) -> LossReport {
    let mut gradients = BTreeMap::new();
    for (k, g) in report.gradients {
        gradients.insert(if k == PRED { name.to_string() } else { k }, g);
    }
    LossReport {
        value: report.value,
        gradients,
    }
}

/// Full enhancement objective.
///
/// Simulated mode: `L_J + L_B + L_t + c_I·L_I`. Real mode: `L_I` alone.
/// Gradients are keyed `J`, `B`, `t` with respect to the prediction.
pub fn enhance_loss(
    pred: &PhysicalMaps,
    truth: Option<&PhysicalMaps>,
    observed: &PlanarImage,
    weights: EnhanceWeights,
    mode: EnhanceMode,
) -> Result<LossReport> {
    let physical = physical_loss(observed, pred)?;
    match mode {
        EnhanceMode::Real => Ok(physical),
        EnhanceMode::Simulated => {
            let truth = truth.ok_or_else(|| {
                Error::Config("simulated mode needs ground-truth J, B and t".into())
            })?;
            truth.ensure_consistent("enhance_loss ground truth")?;
            let mut total = LossReport::zero();
            total.accumulate(&rekey(l1_loss(&pred.clean, &truth.clean)?, GRAD_J), 1.0);
            total.accumulate(
                &rekey(
                    background_loss(&pred.background, &truth.background)?,
                    GRAD_B,
                ),
                1.0,
            );
            total.accumulate(
                &rekey(
                    transmission_loss(&pred.transmission, &truth.transmission)?,
                    GRAD_T,
                ),
                1.0,
            );
            total.accumulate(&physical, weights.c_i);
            Ok(total)
        }
    }
}
