use crate::error::Result;
use crate::optics::PlanarImage;

use super::{sign, LossReport};

/// Mean absolute error; gradient `sign(pred − target) / N`.
pub fn l1_loss(pred: &PlanarImage, target: &PlanarImage) -> Result<LossReport> {
    pred.ensure_same_shape(target, "l1_loss")?;
    let n = pred.len() as f64;
    let mut sum = 0.0;
    let grad = pred
        .data()
        .iter()
        .zip(target.data())
        .map(|(&p, &t)| {
            let d = p - t;
            sum += d.abs();
            sign(d) / n
        })
        .collect();
    Ok(LossReport::single(
        sum / n,
        PlanarImage::from_parts_unchecked(pred.height(), pred.width(), pred.channels(), grad),
    ))
}

/// Mean of `ln(|pred − target| + 1)`: grows like L1 for small errors and
/// logarithmically for large ones.
pub fn log_robust_loss(pred: &PlanarImage, target: &PlanarImage) -> Result<LossReport> {
    pred.ensure_same_shape(target, "log_robust_loss")?;
    let (value, grad) = log_robust_terms(
        pred.data().iter().zip(target.data()).map(|(&p, &t)| p - t),
        pred.len(),
    );
    Ok(LossReport::single(
        value,
        PlanarImage::from_parts_unchecked(pred.height(), pred.width(), pred.channels(), grad),
    ))
}

/// Mean `ln(|d| + 1)` over `n` differences and its derivative with respect
/// to each difference.
pub(super) fn log_robust_terms(diffs: impl Iterator<Item = f64>, n: usize) -> (f64, Vec<f64>) {
    let nf = n as f64;
    let mut sum = 0.0;
    let mut grad = Vec::with_capacity(n);
    for d in diffs {
        let a = d.abs();
        sum += a.ln_1p();
        grad.push(sign(d) / ((a + 1.0) * nf));
    }
    (sum / nf, grad)
}
