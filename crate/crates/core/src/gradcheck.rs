//! Central finite-difference check of an analytic gradient.

use crate::error::Result;

/// Step for the central difference.
pub const STEP: f64 = 1e-6;
/// Elements whose one-sided differences disagree by more than this
/// (relative) straddle a kink and are skipped.
pub const KINK_TOLERANCE: f64 = 1e-3;
/// Floor on the denominator of the relative discrepancy.
const REL_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GradCheck {
    pub max_relative: f64,
    pub checked: usize,
    pub skipped: usize,
}

impl GradCheck {
    pub fn merge(&mut self, other: GradCheck) {
        self.max_relative = self.max_relative.max(other.max_relative);
        self.checked += other.checked;
        self.skipped += other.skipped;
    }
}

pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_FLOOR)
}

/// Indices of up to `max` elements spread evenly over `0..len`.
pub fn strided(len: usize, max: usize) -> Vec<usize> {
    if len <= max {
        return (0..len).collect();
    }
    (0..max).map(|k| k * len / max).collect()
}

/// Compares `analytic` with central differences of `f` around `x`.
pub fn check(
    x: &[f64],
    analytic: &[f64],
    max_elements: usize,
    f: impl Fn(&[f64]) -> Result<f64>,
) -> Result<GradCheck> {
    let f0 = f(x)?;
    let mut probe = x.to_vec();
    let mut out = GradCheck::default();
    for i in strided(x.len(), max_elements) {
        probe[i] = x[i] + STEP;
        let up = f(&probe)?;
        probe[i] = x[i] - STEP;
        let down = f(&probe)?;
        probe[i] = x[i];
        let forward = (up - f0) / STEP;
        let backward = (f0 - down) / STEP;
        if relative(forward, backward) > KINK_TOLERANCE {
            out.skipped += 1;
            continue;
        }
        let central = (up - down) / (2.0 * STEP);
        out.max_relative = out.max_relative.max(relative(analytic[i], central));
        out.checked += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_function_matches() {
        let x = [0.3, -1.2, 2.0];
        let grad: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let r = check(&x, &grad, 10, |v| Ok(v.iter().map(|a| a * a).sum())).unwrap();
        assert_eq!(r.checked, 3);
        assert!(r.max_relative < 1e-6);
    }

    #[test]
    fn kink_is_skipped() {
        let x = [0.0, 1.0];
        let r = check(&x, &[0.0, 1.0], 10, |v| Ok(v.iter().map(|a| a.abs()).sum())).unwrap();
        assert_eq!((r.checked, r.skipped), (1, 1));
    }

    #[test]
    fn wrong_gradient_is_reported() {
        let r = check(&[1.0], &[3.0], 10, |v| Ok(v[0] * v[0])).unwrap();
        assert!(r.max_relative > 0.3);
    }

    #[test]
    fn stride_caps_count() {
        assert_eq!(strided(10, 4), vec![0, 2, 5, 7]);
        assert_eq!(strided(3, 4), vec![0, 1, 2]);
    }
}
