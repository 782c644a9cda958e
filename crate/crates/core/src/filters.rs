//! Normalised 3×3 Sobel derivatives with replicate padding, and their
//! adjoints for back-propagation.
//!
//! The kernels are scaled by 1/8 so a plane of unit slope produces a unit
//! response. Forward sums pair the mirror-symmetric taps first, which makes
//! the response exactly negated (not merely approximately) under a flip.

use crate::optics::PlanarImage;

/// Taps `(dy, dx, weight)` of the x-derivative kernel.
const SOBEL_X: [(isize, isize, f64); 6] = [
    (-1, -1, -0.125),
    (0, -1, -0.25),
    (1, -1, -0.125),
    (-1, 1, 0.125),
    (0, 1, 0.25),
    (1, 1, 0.125),
];

/// Taps of the y-derivative kernel.
const SOBEL_Y: [(isize, isize, f64); 6] = [
    (-1, -1, -0.125),
    (-1, 0, -0.25),
    (-1, 1, -0.125),
    (1, -1, 0.125),
    (1, 0, 0.25),
    (1, 1, 0.125),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[inline]
fn clamp_index(i: usize, delta: isize, len: usize) -> usize {
    (i as isize + delta).clamp(0, len as isize - 1) as usize
}

/// Sobel response along `axis` for every element, same layout as `img`.
pub fn sobel(img: &PlanarImage, axis: Axis) -> Vec<f64> {
    let (h, w, ch) = (img.height(), img.width(), img.channels());
    let mut out = Vec::with_capacity(img.len());
    for y in 0..h {
        let ym = clamp_index(y, -1, h);
        let yp = clamp_index(y, 1, h);
        for x in 0..w {
            let xm = clamp_index(x, -1, w);
            let xp = clamp_index(x, 1, w);
            for c in 0..ch {
                let p = |yy: usize, xx: usize| img.get(yy, xx, c);
                let (hi, lo) = match axis {
                    Axis::X => (
                        (p(ym, xp) + p(yp, xp)) + 2.0 * p(y, xp),
                        (p(ym, xm) + p(yp, xm)) + 2.0 * p(y, xm),
                    ),
                    Axis::Y => (
                        (p(yp, xm) + p(yp, xp)) + 2.0 * p(yp, x),
                        (p(ym, xm) + p(ym, xp)) + 2.0 * p(ym, x),
                    ),
                };
                out.push((hi - lo) * 0.125);
            }
        }
    }
    out
}

/// Adjoint of [`sobel`]: given `∂L/∂G` for the response `G`, returns
/// `∂L/∂img`. Replicate padding folds the out-of-range taps back onto the
/// border pixels.
pub fn sobel_adjoint(
    upstream: &[f64],
    height: usize,
    width: usize,
    channels: usize,
    axis: Axis,
) -> Vec<f64> {
    assert_eq!(upstream.len(), height * width * channels);
    let taps = match axis {
        Axis::X => &SOBEL_X,
        Axis::Y => &SOBEL_Y,
    };
    let mut grad = vec![0.0; upstream.len()];
    for y in 0..height {
        for x in 0..width {
            let base = (y * width + x) * channels;
            for &(dy, dx, wgt) in taps {
                let yy = clamp_index(y, dy, height);
                let xx = clamp_index(x, dx, width);
                let dst = (yy * width + xx) * channels;
                for c in 0..channels {
                    grad[dst + c] += wgt * upstream[base + c];
                }
            }
        }
    }
    grad
}

/// Sobel response along `axis` computed from the tap table; used in tests
/// to cross-check the paired-sum forward path.
#[cfg(test)]
pub(crate) fn sobel_by_taps(img: &PlanarImage, axis: Axis) -> Vec<f64> {
    let taps = match axis {
        Axis::X => &SOBEL_X,
        Axis::Y => &SOBEL_Y,
    };
    let (h, w, ch) = (img.height(), img.width(), img.channels());
    let mut out = Vec::with_capacity(img.len());
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                out.push(
                    taps.iter()
                        .map(|&(dy, dx, wgt)| {
                            wgt * img.get(clamp_index(y, dy, h), clamp_index(x, dx, w), c)
                        })
                        .sum(),
                );
            }
        }
    }
    out
}
