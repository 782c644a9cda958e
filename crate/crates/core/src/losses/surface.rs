use crate::error::{Error, Result};
use crate::filters::{sobel, sobel_adjoint, Axis};
use crate::optics::PlanarImage;

use super::pixel::log_robust_terms;
use super::LossReport;

fn ensure_kernel_fits(img: &PlanarImage, what: &str) -> Result<()> {
    if img.height() < 3 || img.width() < 3 {
        return Err(Error::Shape(format!(
            "{what}: image {}x{} smaller than the 3x3 kernel",
            img.height(),
            img.width()
        )));
    }
    Ok(())
}

/// Log-robust penalty on the Sobel derivatives of `pred − target`:
/// `mean ln(|∂x D| + 1) + mean ln(|∂y D| + 1)`.
pub fn sobel_gradient_loss(pred: &PlanarImage, target: &PlanarImage) -> Result<LossReport> {
    pred.ensure_same_shape(target, "sobel_gradient_loss")?;
    ensure_kernel_fits(pred, "sobel_gradient_loss")?;
    let diff = pred.zip_map(target, |p, t| p - t)?;
    let (h, w, ch, n) = (pred.height(), pred.width(), pred.channels(), pred.len());

    let gx = sobel(&diff, Axis::X);
    let gy = sobel(&diff, Axis::Y);
    let (lx, ux) = log_robust_terms(gx.into_iter(), n);
    let (ly, uy) = log_robust_terms(gy.into_iter(), n);

    let mut grad = sobel_adjoint(&ux, h, w, ch, Axis::X);
    for (g, v) in grad.iter_mut().zip(sobel_adjoint(&uy, h, w, ch, Axis::Y)) {
        *g += v;
    }
    Ok(LossReport::single(
        lx + ly,
        PlanarImage::from_parts_unchecked(h, w, ch, grad),
    ))
}

/// Mean `1 − cos(n_pred, n_target)` where each map is treated as a height
/// field with per-element normal `(−∂x, −∂y, 1)` from Sobel derivatives.
pub fn normal_loss(pred: &PlanarImage, target: &PlanarImage) -> Result<LossReport> {
    pred.ensure_same_shape(target, "normal_loss")?;
    ensure_kernel_fits(pred, "normal_loss")?;
    let (h, w, ch, n) = (pred.height(), pred.width(), pred.channels(), pred.len());
    let nf = n as f64;

    let pgx = sobel(pred, Axis::X);
    let pgy = sobel(pred, Axis::Y);
    let tgx = sobel(target, Axis::X);
    let tgy = sobel(target, Axis::Y);

    let mut sum = 0.0;
    let mut ux = Vec::with_capacity(n);
    let mut uy = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (pgx[i], pgy[i]);
        let (c, d) = (tgx[i], tgy[i]);
        // (−a, −b, 1)·(−c, −d, 1) = ac + bd + 1
        let dot = a * c + b * d + 1.0;
        let np = (a * a + b * b + 1.0).sqrt();
        let nt = (c * c + d * d + 1.0).sqrt();
        // 1 − cos = |n̂p − n̂t|² / 2, exactly zero when the normals agree.
        let (ip, it) = (1.0 / np, 1.0 / nt);
        let (ex, ey, ez) = (c * it - a * ip, d * it - b * ip, ip - it);
        sum += 0.5 * (ex * ex + ey * ey + ez * ez);
        let inv = 1.0 / (np * nt);
        let k = dot / (np * np * np * nt);
        ux.push(-(c * inv - a * k) / nf);
        uy.push(-(d * inv - b * k) / nf);
    }

    let mut grad = sobel_adjoint(&ux, h, w, ch, Axis::X);
    for (g, v) in grad.iter_mut().zip(sobel_adjoint(&uy, h, w, ch, Axis::Y)) {
        *g += v;
    }
    Ok(LossReport::single(
        sum / nf,
        PlanarImage::from_parts_unchecked(h, w, ch, grad),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn wavy(h: usize, w: usize) -> PlanarImage {
        PlanarImage::from_fn(h, w, 3, |y, x, c| {
            0.5 + 0.3 * ((y as f64 * 0.7 + c as f64).sin() * (x as f64 * 0.4).cos())
        })
        .unwrap()
    }

    #[test]
    fn zero_for_identical_and_offset_maps() {
        let t = wavy(5, 6);
        let shifted = t.map(|v| v + 0.37).unwrap();
        for f in [sobel_gradient_loss, normal_loss] {
            assert_eq!(f(&t, &t).unwrap().value, 0.0);
            assert_abs_diff_eq!(f(&shifted, &t).unwrap().value, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn single_pixel_difference_hand_convolution() {
        // 5x5, one channel, difference of 1 at the center. Interior Sobel
        // responses around the impulse are ±1/8 (corners) and ±1/4 (edges).
        let target = PlanarImage::filled(5, 5, 1, 0.0).unwrap();
        let mut pred = target.clone();
        pred.set(2, 2, 0, 1.0).unwrap();
        let r = sobel_gradient_loss(&pred, &target).unwrap();
        // Each axis: 4 taps of 1/8 and 2 taps of 1/4, all other responses 0.
        let per_axis = (4.0 * (1.125f64).ln() + 2.0 * (1.25f64).ln()) / 25.0;
        assert_abs_diff_eq!(r.value, 2.0 * per_axis, epsilon = 1e-14);
    }

    #[test]
    fn unit_slope_plane_against_flat() {
        let pred = PlanarImage::from_fn(5, 5, 1, |_, x, _| x as f64).unwrap();
        let flat = PlanarImage::filled(5, 5, 1, 0.0).unwrap();
        let r = normal_loss(&pred, &flat).unwrap();
        // Interior columns have slope 1, the border columns 1/2.
        let interior = 1.0 - 1.0 / 2f64.sqrt();
        let border = 1.0 - 1.0 / 1.25f64.sqrt();
        let expect = (15.0 * interior + 10.0 * border) / 25.0;
        assert_abs_diff_eq!(r.value, expect, epsilon = 1e-14);
        assert_abs_diff_eq!(interior, 0.29289, epsilon = 1e-5);
    }

    #[test]
    fn normal_loss_bounded() {
        let a = wavy(6, 6).map(|v| 40.0 * v).unwrap();
        let b = wavy(6, 6).map(|v| -40.0 * v).unwrap();
        let r = normal_loss(&a, &b).unwrap();
        assert!(r.value >= 0.0 && r.value <= 2.0);
    }

    #[test]
    fn rejects_tiny_images() {
        let a = PlanarImage::filled(2, 5, 3, 0.0).unwrap();
        assert!(sobel_gradient_loss(&a, &a).is_err());
        assert!(normal_loss(&a, &a).is_err());
    }
}
