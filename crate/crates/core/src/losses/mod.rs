//! Enhancement losses with hand-derived gradients.
//!
//! Every loss reduces by the mean over all elements, so weights do not
//! depend on resolution. Gradients are taken with respect to the predicted
//! map(s) and are keyed by input name in [`LossReport::gradients`].

mod enhance;
mod pixel;
mod surface;

use std::collections::BTreeMap;

use crate::optics::PlanarImage;

pub use enhance::{
    background_loss, enhance_loss, physical_loss, transmission_loss, EnhanceMode, EnhanceWeights,
    PhysicalMaps,
};
pub use pixel::{l1_loss, log_robust_loss};
pub use surface::{normal_loss, sobel_gradient_loss};

/// Gradient key used by the single-prediction losses.
pub const PRED: &str = "pred";

#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub value: f64,
    pub gradients: BTreeMap<String, PlanarImage>,
}

impl LossReport {
    pub(crate) fn single(value: f64, grad: PlanarImage) -> Self {
        let mut gradients = BTreeMap::new();
        gradients.insert(PRED.to_string(), grad);
        Self { value, gradients }
    }

    pub fn gradient(&self, name: &str) -> Option<&PlanarImage> {
        self.gradients.get(name)
    }

    /// Adds `weight × other` into `self`, summing gradients key by key.
    pub(crate) fn accumulate(&mut self, other: &LossReport, weight: f64) {
        self.value += weight * other.value;
        for (name, g) in &other.gradients {
            match self.gradients.get_mut(name) {
                Some(acc) => {
                    for (a, b) in acc.data_mut().iter_mut().zip(g.data()) {
                        *a += weight * b;
                    }
                }
                None => {
                    let scaled = PlanarImage::from_parts_unchecked(
                        g.height(),
                        g.width(),
                        g.channels(),
                        g.data().iter().map(|v| weight * v).collect(),
                    );
                    self.gradients.insert(name.clone(), scaled);
                }
            }
        }
    }

    pub(crate) fn zero() -> Self {
        Self {
            value: 0.0,
            gradients: BTreeMap::new(),
        }
    }
}

/// Sign with the subgradient convention `sign(0) = 0`.
#[inline]
pub(crate) fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}
