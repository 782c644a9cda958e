//! Prior-based estimators of background light and transmission, used to
//! enhance images when no learned decomposition is available.
//!
//! These are baselines: a dark-channel style prior, not a model of the
//! scene.

use crate::error::{check_range, Error, Result};
use crate::optics::{PlanarImage, TransmissionMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineParams {
    /// Half-width of the square minimum filter.
    pub patch_radius: usize,
    /// Share of the haze removed; below 1 keeps a trace for depth cues.
    pub omega: f64,
    /// Share of pixels with the largest dark-channel value treated as the
    /// haze-opaque region.
    pub brightest_fraction: f64,
    /// Per-channel quantile of that region taken as background light.
    pub quantile: f64,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            patch_radius: 7,
            omega: 0.95,
            brightest_fraction: 0.001,
            quantile: 0.999,
        }
    }
}

impl BaselineParams {
    pub fn validate(&self) -> Result<()> {
        check_range("omega", self.omega, 0.0, 1.0)?;
        check_range("brightest_fraction", self.brightest_fraction, 0.0, 1.0)?;
        check_range("quantile", self.quantile, 0.0, 1.0)?;
        Ok(())
    }
}

/// Estimated maps, shaped like the input image.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineEstimate {
    pub background: PlanarImage,
    pub transmission: TransmissionMap,
}

/// Minimum filter over a `(2r+1)²` window, truncated at the borders.
fn min_filter(values: &[f64], h: usize, w: usize, r: usize) -> Vec<f64> {
    let mut rows = vec![0.0; values.len()];
    for y in 0..h {
        for x in 0..w {
            let (x0, x1) = (x.saturating_sub(r), (x + r).min(w - 1));
            rows[y * w + x] = values[y * w + x0..=y * w + x1]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
        }
    }
    let mut out = vec![0.0; values.len()];
    for y in 0..h {
        let (y0, y1) = (y.saturating_sub(r), (y + r).min(h - 1));
        for x in 0..w {
            out[y * w + x] = (y0..=y1)
                .map(|yy| rows[yy * w + x])
                .fold(f64::INFINITY, f64::min);
        }
    }
    out
}

/// Per-pixel minimum over channels followed by the patch minimum filter.
pub fn dark_channel(img: &PlanarImage, patch_radius: usize) -> Vec<f64> {
    let ch = img.channels();
    let mins: Vec<f64> = img
        .data()
        .chunks_exact(ch)
        .map(|px| px.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    min_filter(&mins, img.height(), img.width(), patch_radius)
}

/// Value at quantile `q` of `values` (nearest rank, `values` non-empty).
fn quantile(mut values: Vec<f64>, q: f64) -> f64 {
    values.sort_by(f64::total_cmp);
    let idx = ((q * (values.len() - 1) as f64).round() as usize).min(values.len() - 1);
    values[idx]
}

/// Background light: among the pixels whose dark channel is in the top
/// `brightest_fraction`, the per-channel `quantile` of the observed colour.
pub fn estimate_background(img: &PlanarImage, params: &BaselineParams) -> Result<[f64; 3]> {
    params.validate()?;
    if img.channels() != 3 {
        return Err(Error::Shape(format!(
            "expected an RGB image, got {}",
            img.shape_string()
        )));
    }
    let dark = dark_channel(img, params.patch_radius);
    let n = dark.len();
    let take = ((params.brightest_fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    // Stable on ties: earlier pixels win, keeping the result deterministic.
    order.sort_by(|&a, &b| dark[b].total_cmp(&dark[a]).then(a.cmp(&b)));
    let region = &order[..take];
    let mut out = [0.0; 3];
    for (c, slot) in out.iter_mut().enumerate() {
        let vals = region.iter().map(|&p| img.data()[p * 3 + c]).collect();
        *slot = quantile(vals, params.quantile);
    }
    Ok(out)
}

/// Per-channel transmission `t_c = 1 − ω · minpatch(I_c / B_c)`, clamped to
/// `[t_floor, 1]`. Each channel gets its own estimate because attenuation
/// under water depends strongly on wavelength.
pub fn estimate_transmission(
    img: &PlanarImage,
    background: [f64; 3],
    params: &BaselineParams,
    t_floor: f64,
) -> Result<TransmissionMap> {
    params.validate()?;
    check_range("t_floor", t_floor, f64::MIN_POSITIVE, 1.0)?;
    if img.channels() != 3 {
        return Err(Error::Shape(format!(
            "expected an RGB image, got {}",
            img.shape_string()
        )));
    }
    let (h, w) = (img.height(), img.width());
    let dark: Vec<Vec<f64>> = (0..3)
        .map(|c| {
            let ratio: Vec<f64> = img
                .data()
                .chunks_exact(3)
                .map(|px| px[c] / background[c].max(1e-6))
                .collect();
            min_filter(&ratio, h, w, params.patch_radius)
        })
        .collect();
    let t = PlanarImage::from_fn(h, w, 3, |y, x, c| 1.0 - params.omega * dark[c][y * w + x])?;
    TransmissionMap::from_estimate(&t, t_floor)
}

/// Estimates both maps for an observed RGB image.
pub fn estimate_maps(
    img: &PlanarImage,
    params: &BaselineParams,
    t_floor: f64,
) -> Result<BaselineEstimate> {
    let b = estimate_background(img, params)?;
    let transmission = estimate_transmission(img, b, params, t_floor)?;
    let background = PlanarImage::from_fn(img.height(), img.width(), 3, |_, _, c| b[c])?;
    Ok(BaselineEstimate {
        background,
        transmission,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_filter_by_hand() {
        let v = [5.0, 1.0, 7.0, 3.0, 9.0, 2.0];
        assert_eq!(min_filter(&v, 2, 3, 0), v.to_vec());
        assert_eq!(min_filter(&v, 2, 3, 1), vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(min_filter(&v, 1, 6, 1), vec![1.0, 1.0, 1.0, 3.0, 2.0, 2.0]);
    }

    #[test]
    fn haze_only_image_recovers_its_colour() {
        let img = PlanarImage::from_fn(10, 10, 3, |_, _, c| [0.2, 0.6, 0.7][c]).unwrap();
        let est = estimate_maps(&img, &BaselineParams::default(), 0.01).unwrap();
        assert_eq!(est.background.get(0, 0, 1), 0.6);
        // Pure veiling light: I/B = 1, so t = 1 − ω in every channel.
        for c in 0..3 {
            assert!((est.transmission.image().get(3, 3, c) - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn black_pixels_have_full_transmission() {
        let img = PlanarImage::from_fn(9, 9, 3, |y, _, _| if y < 5 { 0.0 } else { 0.8 }).unwrap();
        let params = BaselineParams {
            patch_radius: 1,
            ..BaselineParams::default()
        };
        let est = estimate_maps(&img, &params, 0.1).unwrap();
        assert_eq!(est.transmission.image().get(0, 0, 2), 1.0);
    }
}
