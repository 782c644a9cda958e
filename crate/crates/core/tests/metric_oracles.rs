//! Quality metrics against straight-line recomputations.

use approx::assert_abs_diff_eq;
use aquasim::metrics::{
    quality_score, uciqe, uiqm, CHROMA_WEIGHT, CONTRAST_WEIGHT, SATURATION_WEIGHT, UICM_WEIGHT,
    UICONM_WEIGHT, UISM_WEIGHT,
};
use aquasim::PlanarImage;

/// Published CIELab (D65) coordinates of sRGB primaries.
const RED_LAB: [f64; 3] = [53.2408, 80.0925, 67.2032];
const BLUE_LAB: [f64; 3] = [32.2970, 79.1875, -107.8602];

fn chroma(lab: [f64; 3]) -> f64 {
    (lab[1] * lab[1] + lab[2] * lab[2]).sqrt()
}

#[test]
fn uciqe_two_colour_checkerboard() {
    let img = PlanarImage::from_fn(4, 4, 3, |y, x, c| {
        let red = (y + x) % 2 == 0;
        match (red, c) {
            (true, 0) | (false, 2) => 1.0,
            _ => 0.0,
        }
    })
    .unwrap();
    let s = uciqe(&img).unwrap();

    // Eight pixels of each colour; one pixel per luminance tail.
    let (l_r, l_b) = (RED_LAB[0] / 100.0, BLUE_LAB[0] / 100.0);
    let (c_r, c_b) = (chroma(RED_LAB) / 100.0, chroma(BLUE_LAB) / 100.0);
    let chroma_std = (c_r - c_b).abs() / 2.0;
    let contrast = l_r - l_b;
    let sat = (c_r / (c_r * c_r + l_r * l_r).sqrt() + c_b / (c_b * c_b + l_b * l_b).sqrt()) / 2.0;
    let expected = 0.4680 * chroma_std + 0.2745 * contrast + 0.2576 * sat;

    assert_abs_diff_eq!(s.chroma_std, chroma_std, epsilon = 2e-5);
    assert_abs_diff_eq!(s.luminance_contrast, contrast, epsilon = 2e-5);
    assert_abs_diff_eq!(s.saturation_mean, sat, epsilon = 2e-5);
    assert_abs_diff_eq!(s.uciqe, expected, epsilon = 2e-5);
    assert_eq!(
        [CHROMA_WEIGHT, CONTRAST_WEIGHT, SATURATION_WEIGHT],
        [0.4680, 0.2745, 0.2576]
    );
}

fn gradient_16() -> PlanarImage {
    PlanarImage::from_fn(16, 16, 3, |y, x, c| {
        let v = match c {
            0 => 0.05 + 0.9 * x as f64 / 15.0,
            1 => 0.1 + 0.8 * y as f64 / 15.0,
            _ => 0.2 + 0.04 * ((x + 2 * y) % 9) as f64,
        };
        (v * 255.0).round() / 255.0
    })
    .unwrap()
}

fn px(img: &PlanarImage, y: isize, x: isize, c: usize) -> f64 {
    let yy = y.clamp(0, 15) as usize;
    let xx = x.clamp(0, 15) as usize;
    255.0 * img.get(yy, xx, c)
}

fn trimmed_mean(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    // 256 samples: ceil(25.6) = 26 low, floor(25.6) = 25 high.
    let kept = &v[26..256 - 25];
    kept.iter().sum::<f64>() / kept.len() as f64
}

#[test]
fn uiqm_brute_force_16x16() {
    let img = gradient_16();

    let mut rg = Vec::new();
    let mut yb = Vec::new();
    for y in 0..16 {
        for x in 0..16 {
            let (r, g, b) = (px(&img, y, x, 0), px(&img, y, x, 1), px(&img, y, x, 2));
            rg.push(r - g);
            yb.push((r + g) / 2.0 - b);
        }
    }
    let (mrg, myb) = (trimmed_mean(rg.clone()), trimmed_mean(yb.clone()));
    let vrg = rg.iter().map(|v| (v - mrg).powi(2)).sum::<f64>() / 256.0;
    let vyb = yb.iter().map(|v| (v - myb).powi(2)).sum::<f64>() / 256.0;
    let uicm = -0.0268 * (mrg * mrg + myb * myb).sqrt() + 0.1586 * (vrg + vyb).sqrt();

    let mut uism = 0.0;
    for (c, weight) in [0.299, 0.587, 0.114].into_iter().enumerate() {
        let mut edge = [[0.0; 16]; 16];
        for y in 0..16isize {
            for x in 0..16isize {
                let p = |dy: isize, dx: isize| px(&img, y + dy, x + dx, c);
                let gx =
                    (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1) - p(-1, -1) - 2.0 * p(0, -1) - p(1, -1))
                        / 8.0;
                let gy =
                    (p(1, -1) + 2.0 * p(1, 0) + p(1, 1) - p(-1, -1) - 2.0 * p(-1, 0) - p(-1, 1))
                        / 8.0;
                edge[y as usize][x as usize] = (gx * gx + gy * gy).sqrt() * p(0, 0);
            }
        }
        let mut eme = 0.0;
        for by in 0..2 {
            for bx in 0..2 {
                let mut hi = f64::MIN;
                let mut lo = f64::MAX;
                for row in &edge[by * 8..by * 8 + 8] {
                    for &v in &row[bx * 8..bx * 8 + 8] {
                        hi = hi.max(v);
                        lo = lo.min(v);
                    }
                }
                if lo > 0.0 {
                    eme += (hi / lo).ln();
                }
            }
        }
        uism += weight * 2.0 / 4.0 * eme;
    }

    let mut uiconm = 0.0;
    for by in 0..2 {
        for bx in 0..2 {
            let mut hi = f64::MIN;
            let mut lo = f64::MAX;
            for y in by * 8..by * 8 + 8 {
                for x in bx * 8..bx * 8 + 8 {
                    for c in 0..3 {
                        let v = px(&img, y as isize, x as isize, c);
                        hi = hi.max(v);
                        lo = lo.min(v);
                    }
                }
            }
            let r = (hi - lo) / (hi + lo);
            uiconm -= r * r.ln() / 4.0;
        }
    }
    let expected = 0.0282 * uicm + 0.2953 * uism + 3.5753 * uiconm;

    let s = uiqm(&img).unwrap();
    assert_abs_diff_eq!(s.uicm, uicm, epsilon = 1e-9);
    assert_abs_diff_eq!(s.uism, uism, epsilon = 1e-9);
    assert_abs_diff_eq!(s.uiconm, uiconm, epsilon = 1e-12);
    assert_abs_diff_eq!(s.uiqm, expected, epsilon = 1e-9);
    assert_eq!(
        [UICM_WEIGHT, UISM_WEIGHT, UICONM_WEIGHT],
        [0.0282, 0.2953, 3.5753]
    );
}

#[test]
fn quality_score_combines_both() {
    let img = gradient_16();
    let q = quality_score(&img).unwrap();
    assert_eq!(q.uiqm, uiqm(&img).unwrap());
    assert_eq!(q.uciqe, uciqe(&img).unwrap());
}
