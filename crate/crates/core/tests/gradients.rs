//! Analytic gradients against central finite differences, 100 random
//! instances per loss. Elements whose one-sided differences disagree sit on
//! a kink and are excluded.

mod common;

use aquasim::detection::{bce_classification_loss, ciou_loss, BoundingBox};
use aquasim::gradcheck::{check, GradCheck};
use aquasim::losses::{
    background_loss, enhance_loss, l1_loss, log_robust_loss, normal_loss, physical_loss,
    sobel_gradient_loss, EnhanceMode, EnhanceWeights, LossReport, PhysicalMaps, PRED,
};
use aquasim::PlanarImage;
use common::{random_image, rng};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const INSTANCES: u64 = 100;
const TOLERANCE: f64 = 1e-4;

fn with_data(like: &PlanarImage, data: &[f64]) -> PlanarImage {
    PlanarImage::new(like.height(), like.width(), like.channels(), data.to_vec()).unwrap()
}

fn assert_passes(name: &str, total: GradCheck) {
    assert!(
        total.max_relative < TOLERANCE,
        "{name}: max relative discrepancy {:.3e}",
        total.max_relative
    );
    assert!(
        total.checked > 10 * total.skipped,
        "{name}: {} checked, {} skipped",
        total.checked,
        total.skipped
    );
}

fn pair_suite(
    name: &str,
    seed: u64,
    loss: fn(&PlanarImage, &PlanarImage) -> aquasim::Result<LossReport>,
) {
    let mut total = GradCheck::default();
    for i in 0..INSTANCES {
        let mut r = rng(seed + i);
        let (h, w, c) = (
            r.random_range(3..7),
            r.random_range(3..7),
            if r.random_bool(0.5) { 1 } else { 3 },
        );
        let pred = random_image(&mut r, h, w, c, 0.0, 2.0);
        let target = random_image(&mut r, h, w, c, 0.0, 2.0);
        let report = loss(&pred, &target).unwrap();
        let g = report.gradient(PRED).unwrap();
        let res = check(pred.data(), g.data(), usize::MAX, |x| {
            Ok(loss(&with_data(&pred, x), &target)?.value)
        })
        .unwrap();
        total.merge(res);
    }
    assert_passes(name, total);
}

#[test]
fn l1_gradient() {
    pair_suite("l1", 1_000, l1_loss);
}

#[test]
fn log_robust_gradient() {
    pair_suite("log_robust", 2_000, log_robust_loss);
}

#[test]
fn sobel_gradient_gradient() {
    pair_suite("sobel_gradient", 3_000, sobel_gradient_loss);
}

#[test]
fn normal_gradient() {
    pair_suite("normal", 4_000, normal_loss);
}

#[test]
fn background_gradient() {
    pair_suite("background", 5_000, background_loss);
}

fn random_maps(r: &mut ChaCha8Rng, h: usize, w: usize) -> PhysicalMaps {
    PhysicalMaps {
        clean: random_image(r, h, w, 3, 0.0, 1.0),
        background: random_image(r, h, w, 3, 0.0, 3.0),
        transmission: random_image(r, h, w, 3, 0.05, 1.0),
    }
}

fn maps_suite(
    name: &str,
    seed: u64,
    eval: impl Fn(&PhysicalMaps, &PhysicalMaps, &PlanarImage) -> LossReport,
) {
    let mut total = GradCheck::default();
    for i in 0..INSTANCES {
        let mut r = rng(seed + i);
        let pred = random_maps(&mut r, 4, 4);
        let truth = random_maps(&mut r, 4, 4);
        let observed = random_image(&mut r, 4, 4, 3, 0.0, 1.0);
        let report = eval(&pred, &truth, &observed);
        for key in ["J", "B", "t"] {
            let base = match key {
                "J" => &pred.clean,
                "B" => &pred.background,
                _ => &pred.transmission,
            };
            let g = report.gradient(key).unwrap();
            let res = check(base.data(), g.data(), usize::MAX, |x| {
                let mut probe = pred.clone();
                let img = with_data(base, x);
                match key {
                    "J" => probe.clean = img,
                    "B" => probe.background = img,
                    _ => probe.transmission = img,
                }
                Ok(eval(&probe, &truth, &observed).value)
            })
            .unwrap();
            total.merge(res);
        }
    }
    assert_passes(name, total);
}

#[test]
fn physical_gradient() {
    maps_suite("physical", 6_000, |p, _, i| physical_loss(i, p).unwrap());
}

#[test]
fn enhance_gradient_simulated_and_real() {
    let w = EnhanceWeights::default();
    maps_suite("enhance simulated", 7_000, |p, t, i| {
        enhance_loss(p, Some(t), i, w, EnhanceMode::Simulated).unwrap()
    });
    maps_suite("enhance real", 7_500, |p, _, i| {
        enhance_loss(p, None, i, w, EnhanceMode::Real).unwrap()
    });
}

#[test]
fn bce_gradient() {
    let mut total = GradCheck::default();
    for i in 0..INSTANCES {
        let mut r = rng(8_000 + i);
        let n = r.random_range(1..12);
        let logits: Vec<f64> = (0..n).map(|_| r.random_range(-8.0..8.0)).collect();
        let targets: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        let loss = bce_classification_loss(&logits, &targets).unwrap();
        let res = check(&logits, &loss.gradient, usize::MAX, |x| {
            Ok(bce_classification_loss(x, &targets)?.value)
        })
        .unwrap();
        total.merge(res);
    }
    assert_passes("bce", total);
}

fn random_box(r: &mut ChaCha8Rng) -> [f64; 4] {
    let (x, y) = (r.random_range(0.0..20.0), r.random_range(0.0..20.0));
    [
        x,
        y,
        x + r.random_range(0.5..10.0),
        y + r.random_range(0.5..10.0),
    ]
}

#[test]
fn ciou_gradient() {
    let mut total = GradCheck::default();
    for i in 0..INSTANCES {
        let mut r = rng(9_000 + i);
        let p = random_box(&mut r);
        let t = random_box(&mut r);
        let truth = BoundingBox::new(t[0], t[1], t[2], t[3]).unwrap();
        let eval = |c: &[f64]| ciou_loss(&BoundingBox::new(c[0], c[1], c[2], c[3])?, &truth, 1.0);
        let loss = eval(&p).unwrap();
        let res = check(&p, &loss.gradient, usize::MAX, |x| Ok(eval(x)?.value)).unwrap();
        total.merge(res);
    }
    assert_passes("ciou", total);
}
