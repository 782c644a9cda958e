//! Order-independent reductions: values are sorted before summation so a
//! permutation of the input (a flip, a rotation) yields bit-identical
//! results.

pub(crate) fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

pub(crate) fn sum_sorted(v: &[f64]) -> f64 {
    debug_assert!(v.windows(2).all(|w| w[0] <= w[1]));
    v.iter().sum()
}

/// Mean taken relative to the minimum, so constant input returns that
/// constant exactly.
pub(crate) fn mean(v: Vec<f64>) -> f64 {
    let n = v.len() as f64;
    let s = sorted(v);
    let base = s[0];
    let offsets: Vec<f64> = s.iter().map(|x| x - base).collect();
    base + sum_sorted(&offsets) / n
}

/// Population variance around `center`.
pub(crate) fn variance_about(v: &[f64], center: f64) -> f64 {
    let sq: Vec<f64> = v.iter().map(|x| (x - center) * (x - center)).collect();
    mean(sq)
}

/// Standard deviation with the mean taken order-independently.
pub(crate) fn std_dev(v: &[f64]) -> f64 {
    let mu = mean(v.to_vec());
    variance_about(v, mu).sqrt()
}

/// Splits `len` into blocks of `size`, mirror-symmetric about the centre.
///
/// When `size` divides `len` the blocks are uniform. Otherwise the
/// remainder is absorbed by a single central block, so reversing the axis
/// maps the partition onto itself. Requires `len >= size`.
pub(crate) fn symmetric_blocks(len: usize, size: usize) -> Vec<(usize, usize)> {
    assert!(size > 0 && len >= size);
    let k = len / size;
    if len.is_multiple_of(size) {
        return (0..k).map(|i| (i * size, (i + 1) * size)).collect();
    }
    let side = (k - 1) / 2;
    let mut blocks: Vec<(usize, usize)> = (0..side).map(|i| (i * size, (i + 1) * size)).collect();
    blocks.push((side * size, len - side * size));
    blocks.extend(
        (0..side)
            .rev()
            .map(|i| (len - (i + 1) * size, len - i * size)),
    );
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_cover_and_mirror() {
        for len in 8..80 {
            let blocks = symmetric_blocks(len, 8);
            assert_eq!(blocks[0].0, 0);
            assert_eq!(blocks.last().unwrap().1, len);
            for w in blocks.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
            for (a, b) in blocks.iter().zip(blocks.iter().rev()) {
                assert_eq!(a.1 - a.0, b.1 - b.0);
                assert_eq!(a.0, len - b.1);
            }
            assert!(blocks.iter().all(|(s, e)| e - s >= 8));
        }
        assert_eq!(symmetric_blocks(16, 8), vec![(0, 8), (8, 16)]);
        assert_eq!(symmetric_blocks(20, 8), vec![(0, 20)]);
        assert_eq!(symmetric_blocks(27, 8), vec![(0, 8), (8, 19), (19, 27)]);
    }

    #[test]
    fn std_of_constant_is_zero() {
        assert_eq!(std_dev(&[0.3; 17]), 0.0);
    }
}
