use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::BoundingBox;

/// CIoU loss value, its components, and `∂loss/∂[x_min, y_min, x_max, y_max]`
/// of the predicted box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiouLoss {
    pub value: f64,
    pub iou: f64,
    /// Normalised center distance `ρ² / c²`.
    pub distance: f64,
    /// Aspect-ratio consistency `μ`.
    pub aspect: f64,
    pub gradient: [f64; 4],
}

const ASPECT_SCALE: f64 = 4.0 / (PI * PI);

/// `1 − IoU + ρ²/c² + weight·μ` with
/// `μ = 4/π²·(atan(w_gt/h_gt) − atan(w/h))²`.
///
/// The ground truth must have positive area. Subgradients at the `min`/`max`
/// kinks follow the branch taken by the forward pass.
pub fn ciou_loss(pred: &BoundingBox, truth: &BoundingBox, weight: f64) -> Result<CiouLoss> {
    let area = truth.area();
    if area.is_nan() || area <= 0.0 {
        return Err(Error::Domain(format!(
            "ground-truth box {:?} has zero area",
            truth.coords()
        )));
    }
    let [x1, y1, x2, y2] = pred.coords();
    let [gx1, gy1, gx2, gy2] = truth.coords();
    let (w, h) = (x2 - x1, y2 - y1);
    let (gw, gh) = (gx2 - gx1, gy2 - gy1);

    // Overlap.
    let ix1 = x1.max(gx1);
    let ix2 = x2.min(gx2);
    let iy1 = y1.max(gy1);
    let iy2 = y2.min(gy2);
    let iw = (ix2 - ix1).max(0.0);
    let ih = (iy2 - iy1).max(0.0);
    let inter = iw * ih;
    let union = w * h + gw * gh - inter;
    let iou = inter / union;

    let mut d_inter = [0.0; 4];
    if iw > 0.0 && ih > 0.0 {
        let diw = [
            if x1 > gx1 { -1.0 } else { 0.0 },
            0.0,
            if x2 < gx2 { 1.0 } else { 0.0 },
            0.0,
        ];
        let dih = [
            0.0,
            if y1 > gy1 { -1.0 } else { 0.0 },
            0.0,
            if y2 < gy2 { 1.0 } else { 0.0 },
        ];
        for k in 0..4 {
            d_inter[k] = ih * diw[k] + iw * dih[k];
        }
    }
    let d_area = [-h, -w, h, w];
    let mut d_iou = [0.0; 4];
    for k in 0..4 {
        let d_union = d_area[k] - d_inter[k];
        d_iou[k] = (d_inter[k] * union - inter * d_union) / (union * union);
    }

    // Center distance over enclosing diagonal.
    let [cx, cy] = pred.center();
    let [gcx, gcy] = truth.center();
    let rho2 = (cx - gcx).powi(2) + (cy - gcy).powi(2);
    let ew = x2.max(gx2) - x1.min(gx1);
    let eh = y2.max(gy2) - y1.min(gy1);
    let c2 = ew * ew + eh * eh;
    let mut distance = 0.0;
    let mut d_distance = [0.0; 4];
    if c2 > 0.0 {
        distance = rho2 / c2;
        let d_rho2 = [cx - gcx, cy - gcy, cx - gcx, cy - gcy];
        let dew = [
            if x1 < gx1 { -1.0 } else { 0.0 },
            0.0,
            if x2 > gx2 { 1.0 } else { 0.0 },
            0.0,
        ];
        let deh = [
            0.0,
            if y1 < gy1 { -1.0 } else { 0.0 },
            0.0,
            if y2 > gy2 { 1.0 } else { 0.0 },
        ];
        for k in 0..4 {
            let d_c2 = 2.0 * ew * dew[k] + 2.0 * eh * deh[k];
            d_distance[k] = (d_rho2[k] * c2 - rho2 * d_c2) / (c2 * c2);
        }
    }

    // atan2(w, h) equals atan(w/h) for h > 0 and stays defined for h = 0.
    let theta = w.atan2(h);
    let theta_gt = gw.atan2(gh);
    let delta = theta_gt - theta;
    let aspect = ASPECT_SCALE * delta * delta;
    let r2 = w * w + h * h;
    let mut d_aspect = [0.0; 4];
    if r2 > 0.0 {
        let dtheta_dw = h / r2;
        let dtheta_dh = -w / r2;
        let k = -2.0 * ASPECT_SCALE * delta;
        d_aspect = [-k * dtheta_dw, -k * dtheta_dh, k * dtheta_dw, k * dtheta_dh];
    }

    let mut gradient = [0.0; 4];
    for k in 0..4 {
        gradient[k] = -d_iou[k] + d_distance[k] + weight * d_aspect[k];
    }
    Ok(CiouLoss {
        value: 1.0 - iou + distance + weight * aspect,
        iou,
        distance,
        aspect,
        gradient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bx(a: f64, b: f64, c: f64, d: f64) -> BoundingBox {
        BoundingBox::new(a, b, c, d).unwrap()
    }

    #[test]
    fn identical_boxes_zero() {
        let b = bx(1.0, 2.0, 4.0, 7.0);
        let r = ciou_loss(&b, &b, 1.0).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn concentric_same_aspect_is_one_minus_iou() {
        let gt = bx(0.0, 0.0, 4.0, 2.0);
        let p = bx(1.0, 0.5, 3.0, 1.5);
        let r = ciou_loss(&p, &gt, 1.0).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_abs_diff_eq!(r.aspect, 0.0, epsilon = 1e-30);
        assert_abs_diff_eq!(r.value, 1.0 - 0.25, epsilon = 1e-15);
    }

    #[test]
    fn worked_offset_squares() {
        let r = ciou_loss(&bx(0.0, 0.0, 2.0, 2.0), &bx(1.0, 1.0, 3.0, 3.0), 1.0).unwrap();
        assert_abs_diff_eq!(r.iou, 1.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.distance, 2.0 / 18.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.value, 0.968253968, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_prediction_is_finite() {
        let r = ciou_loss(&bx(2.0, 2.0, 2.0, 2.0), &bx(1.0, 1.0, 3.0, 3.0), 1.0).unwrap();
        assert!(r.value.is_finite());
        assert!(r.gradient.iter().all(|g| g.is_finite()));
        assert!(ciou_loss(&bx(0.0, 0.0, 1.0, 1.0), &bx(1.0, 1.0, 1.0, 3.0), 1.0).is_err());
    }
}
