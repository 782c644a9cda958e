use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::{sobel, Axis};
use crate::optics::PlanarImage;

use super::stats::{mean, sorted, sum_sorted, symmetric_blocks, variance_about};

pub const UICM_WEIGHT: f64 = 0.0282;
pub const UISM_WEIGHT: f64 = 0.2953;
pub const UICONM_WEIGHT: f64 = 3.5753;
/// Side of the square blocks used by the sharpness and contrast terms.
pub const BLOCK_SIZE: usize = 8;
/// Fraction trimmed from each tail of the colourfulness statistics.
pub const TRIM_FRACTION: f64 = 0.1;

/// UIQM and its three component measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UiqmScore {
    pub uicm: f64,
    pub uism: f64,
    pub uiconm: f64,
    pub uiqm: f64,
}

fn check_input(img: &PlanarImage) -> Result<()> {
    if img.channels() != 3 {
        return Err(Error::Shape(format!(
            "UIQM needs an RGB image, got {}",
            img.shape_string()
        )));
    }
    if img.height() < BLOCK_SIZE || img.width() < BLOCK_SIZE {
        return Err(Error::Shape(format!(
            "UIQM needs at least {BLOCK_SIZE}x{BLOCK_SIZE} pixels, got {}",
            img.shape_string()
        )));
    }
    if img.min_value() < 0.0 || img.max_value() > 1.0 {
        return Err(Error::Domain("UIQM input must lie in [0, 1]".into()));
    }
    Ok(())
}

/// Mean of the values left after dropping `ceil(a·K)` from the low end and
/// `floor(a·K)` from the high end.
fn trimmed_mean(values: &[f64]) -> f64 {
    let s = sorted(values.to_vec());
    let k = s.len();
    let lo = (TRIM_FRACTION * k as f64).ceil() as usize;
    let hi = (TRIM_FRACTION * k as f64).floor() as usize;
    // At least 64 samples are guaranteed, so `lo + hi < k`.
    mean(s[lo..k - hi].to_vec())
}

/// Colourfulness from the opponent channels `RG = R − G` and
/// `YB = (R + G)/2 − B`, on a 0–255 scale.
pub fn uicm(img: &PlanarImage) -> Result<f64> {
    check_input(img)?;
    let n = img.pixel_count();
    let mut rg = Vec::with_capacity(n);
    let mut yb = Vec::with_capacity(n);
    for px in img.data().chunks_exact(3) {
        let (r, g, b) = (px[0] * 255.0, px[1] * 255.0, px[2] * 255.0);
        rg.push(r - g);
        yb.push((r + g) / 2.0 - b);
    }
    let mu_rg = trimmed_mean(&rg);
    let mu_yb = trimmed_mean(&yb);
    let var_rg = variance_about(&rg, mu_rg);
    let var_yb = variance_about(&yb, mu_yb);
    Ok(-0.0268 * (mu_rg * mu_rg + mu_yb * mu_yb).sqrt() + 0.1586 * (var_rg + var_yb).sqrt())
}

/// Per-block `(max, min)` over every channel of `values` (layout HWC).
fn block_extrema(values: &[f64], h: usize, w: usize, ch: usize) -> Vec<(f64, f64)> {
    let rows = symmetric_blocks(h, BLOCK_SIZE);
    let cols = symmetric_blocks(w, BLOCK_SIZE);
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for &(y0, y1) in &rows {
        for &(x0, x1) in &cols {
            let mut hi = f64::NEG_INFINITY;
            let mut lo = f64::INFINITY;
            for y in y0..y1 {
                for x in x0..x1 {
                    for c in 0..ch {
                        let v = values[(y * w + x) * ch + c];
                        hi = hi.max(v);
                        lo = lo.min(v);
                    }
                }
            }
            out.push((hi, lo));
        }
    }
    out
}

/// Enhancement measure `2/(k1·k2) · Σ ln(max/min)`; blocks with a zero
/// extremum contribute nothing.
fn eme(values: &[f64], h: usize, w: usize) -> f64 {
    let blocks = block_extrema(values, h, w, 1);
    let terms: Vec<f64> = blocks
        .iter()
        .map(|&(hi, lo)| {
            if hi > 0.0 && lo > 0.0 {
                (hi / lo).ln()
            } else {
                0.0
            }
        })
        .collect();
    2.0 * sum_sorted(&sorted(terms)) / blocks.len() as f64
}

/// Sharpness: EME of each channel's Sobel magnitude weighted by the
/// channel itself, combined with luma weights.
pub fn uism(img: &PlanarImage) -> Result<f64> {
    check_input(img)?;
    let (h, w) = (img.height(), img.width());
    let mut total = 0.0;
    for (c, weight) in [0.299, 0.587, 0.114].into_iter().enumerate() {
        let chan = img.channel(c).map(|v| v * 255.0)?;
        let gx = sobel(&chan, Axis::X);
        let gy = sobel(&chan, Axis::Y);
        let edges: Vec<f64> = chan
            .data()
            .iter()
            .zip(gx.iter().zip(&gy))
            .map(|(v, (a, b))| (a * a + b * b).sqrt() * v)
            .collect();
        total += weight * eme(&edges, h, w);
    }
    Ok(total)
}

/// Contrast: logAMEE over blocks spanning all channels,
/// `−1/(k1·k2) · Σ (top/bot)·ln(top/bot)` with `top = max − min`,
/// `bot = max + min`.
pub fn uiconm(img: &PlanarImage) -> Result<f64> {
    check_input(img)?;
    let scaled: Vec<f64> = img.data().iter().map(|v| v * 255.0).collect();
    let blocks = block_extrema(&scaled, img.height(), img.width(), 3);
    let terms: Vec<f64> = blocks
        .iter()
        .map(|&(hi, lo)| {
            let (top, bot) = (hi - lo, hi + lo);
            if top > 0.0 && bot > 0.0 {
                let r = top / bot;
                r * r.ln()
            } else {
                0.0
            }
        })
        .collect();
    Ok(-sum_sorted(&sorted(terms)) / blocks.len() as f64)
}

/// Underwater Image Quality Measure of an RGB image in `[0, 1]`.
/// Requires at least 8×8 pixels.
pub fn uiqm(img: &PlanarImage) -> Result<UiqmScore> {
    let uicm = uicm(img)?;
    let uism = uism(img)?;
    let uiconm = uiconm(img)?;
    Ok(UiqmScore {
        uicm,
        uism,
        uiconm,
        uiqm: UICM_WEIGHT * uicm + UISM_WEIGHT * uism + UICONM_WEIGHT * uiconm,
    })
}
