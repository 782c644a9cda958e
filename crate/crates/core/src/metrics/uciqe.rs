use serde::Serialize;

use crate::error::{Error, Result};
use crate::optics::PlanarImage;

use super::stats::{mean, sorted, std_dev, sum_sorted};

pub const CHROMA_WEIGHT: f64 = 0.4680;
pub const CONTRAST_WEIGHT: f64 = 0.2745;
pub const SATURATION_WEIGHT: f64 = 0.2576;
/// Share of pixels in each luminance tail used for the contrast term.
pub const CONTRAST_TAIL: f64 = 0.01;

/// UCIQE and its three component measures, with `L` and chroma in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UciqeScore {
    pub chroma_std: f64,
    pub luminance_contrast: f64,
    pub saturation_mean: f64,
    pub uciqe: f64,
}

fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// CIELab (D65) of an sRGB-encoded pixel in `[0, 1]`, returned as
/// `(L/100, chroma/100)`. Neutral pixels get exactly zero chroma.
pub fn lightness_chroma(rgb: [f64; 3]) -> (f64, f64) {
    let [r, g, b] = rgb.map(srgb_to_linear);
    let x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    let y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    let z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    let fy = lab_f(y);
    let l = 116.0 * fy - 16.0;
    if rgb[0] == rgb[1] && rgb[1] == rgb[2] {
        return (l / 100.0, 0.0);
    }
    let a = 500.0 * (lab_f(x / 0.95047) - fy);
    let bb = 200.0 * (fy - lab_f(z / 1.08883));
    (l / 100.0, a.hypot(bb) / 100.0)
}

/// Underwater Colour Image Quality Evaluation of an RGB image in `[0, 1]`:
/// `0.4680·σ_c + 0.2745·con_l + 0.2576·μ_s`.
///
/// `σ_c` is the standard deviation of chroma, `con_l` the gap between the
/// mean of the brightest and darkest 1 % of lightness values, and `μ_s`
/// the mean of `C / √(C² + L²)`.
pub fn uciqe(img: &PlanarImage) -> Result<UciqeScore> {
    if img.channels() != 3 {
        return Err(Error::Shape(format!(
            "UCIQE needs an RGB image, got {}",
            img.shape_string()
        )));
    }
    if img.min_value() < 0.0 || img.max_value() > 1.0 {
        return Err(Error::Domain("UCIQE input must lie in [0, 1]".into()));
    }
    let n = img.pixel_count();
    let mut light = Vec::with_capacity(n);
    let mut chroma = Vec::with_capacity(n);
    let mut sat = Vec::with_capacity(n);
    for px in img.data().chunks_exact(3) {
        let (l, c) = lightness_chroma([px[0], px[1], px[2]]);
        light.push(l);
        chroma.push(c);
        sat.push(if c == 0.0 && l == 0.0 {
            0.0
        } else {
            c / c.hypot(l)
        });
    }
    let chroma_std = std_dev(&chroma);
    let light = sorted(light);
    let k = ((CONTRAST_TAIL * n as f64).floor() as usize).max(1);
    let top = sum_sorted(&light[n - k..]) / k as f64;
    let bottom = sum_sorted(&light[..k]) / k as f64;
    let luminance_contrast = top - bottom;
    let saturation_mean = mean(sat);
    Ok(UciqeScore {
        chroma_std,
        luminance_contrast,
        saturation_mean,
        uciqe: CHROMA_WEIGHT * chroma_std
            + CONTRAST_WEIGHT * luminance_contrast
            + SATURATION_WEIGHT * saturation_mean,
    })
}
