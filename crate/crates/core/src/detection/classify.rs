use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationLoss {
    pub value: f64,
    /// `∂loss/∂logit` per element.
    pub gradient: Vec<f64>,
}

/// Logistic sigmoid `1 / (1 + e^{−p})`, evaluated without overflow.
pub fn sigmoid(p: f64) -> f64 {
    if p >= 0.0 {
        1.0 / (1.0 + (-p).exp())
    } else {
        let e = p.exp();
        e / (1.0 + e)
    }
}

/// Binary cross-entropy over logits, normalised by the total target mass:
///
/// `Σ [−y·ln σ(p) − (1 − y)·ln(1 − σ(p))] / Σ y`
///
/// When every target is zero the sum is divided by one instead.
pub fn bce_classification_loss(logits: &[f64], targets: &[f64]) -> Result<ClassificationLoss> {
    if logits.len() != targets.len() {
        return Err(Error::Shape(format!(
            "{} logits vs {} targets",
            logits.len(),
            targets.len()
        )));
    }
    if let Some(p) = logits.iter().find(|p| !p.is_finite()) {
        return Err(Error::Domain(format!("non-finite logit {p}")));
    }
    if let Some(y) = targets.iter().find(|y| !(0.0..=1.0).contains(*y)) {
        return Err(Error::Domain(format!("target {y} outside [0, 1]")));
    }
    let mass: f64 = targets.iter().sum();
    let denom = if mass > 0.0 { mass } else { 1.0 };

    let mut sum = 0.0;
    let gradient = logits
        .iter()
        .zip(targets)
        .map(|(&p, &y)| {
            // −y ln σ(p) − (1−y) ln(1−σ(p)) = max(p,0) − p·y + ln(1 + e^{−|p|})
            sum += p.max(0.0) - p * y + (-p.abs()).exp().ln_1p();
            (sigmoid(p) - y) / denom
        })
        .collect();
    Ok(ClassificationLoss {
        value: sum / denom,
        gradient,
    })
}
