//! Detection evaluation against an exhaustive oracle.

mod common;
#[path = "support/eval_oracle.rs"]
mod eval_oracle;

use approx::assert_abs_diff_eq;
use aquasim::detection::{iou, BoundingBox};
use aquasim::metrics::{evaluate_detections, EvalConfig};
use common::rng;
use rand::Rng;

#[test]
fn matches_exhaustive_oracle_on_toy_scenes() {
    let config = EvalConfig::default();
    for seed in 0..200 {
        let mut r = rng(seed);
        let (preds, truths) = eval_oracle::toy_scene(&mut r);
        let got = evaluate_detections(&preds, &truths, &config).unwrap();
        let want = eval_oracle::evaluate(
            &preds,
            &truths,
            &config.iou_thresholds,
            config.score_threshold,
        );
        assert_abs_diff_eq!(got.precision, want.precision, epsilon = 1e-12);
        assert_abs_diff_eq!(got.recall, want.recall, epsilon = 1e-12);
        assert_abs_diff_eq!(got.map50, want.map50, epsilon = 1e-12);
        for (g, w) in got.map_per_threshold.iter().zip(&want.map) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-12);
        }
    }
}

#[test]
fn iou_matches_rasterization() {
    let mut r = rng(77);
    for _ in 0..2_000 {
        let mut b = || {
            let x = r.random_range(0..12) as f64;
            let y = r.random_range(0..12) as f64;
            BoundingBox::new(
                x,
                y,
                x + r.random_range(1..9) as f64,
                y + r.random_range(1..9) as f64,
            )
            .unwrap()
        };
        let (p, q) = (b(), b());
        assert_abs_diff_eq!(
            iou(&p, &q),
            eval_oracle::raster_iou(&p, &q),
            epsilon = 1e-12
        );
    }
}

#[test]
fn perfect_predictions_score_one() {
    let truths = (0..)
        .map(|seed| eval_oracle::toy_scene(&mut rng(seed)).1)
        .find(|t| t.iter().map(|i| i.truths.len()).sum::<usize>() >= 3)
        .unwrap();
    let preds: Vec<_> = truths
        .iter()
        .map(|t| aquasim::metrics::ImagePredictions {
            image_id: t.image_id.clone(),
            detections: t
                .truths
                .iter()
                .map(|g| aquasim::detection::Detection::new(g.bbox, g.class_id, 0.9).unwrap())
                .collect(),
        })
        .collect();
    let res = evaluate_detections(&preds, &truths, &EvalConfig::default()).unwrap();
    assert_eq!(
        (res.precision, res.recall, res.map50, res.map50_95c),
        (1.0, 1.0, 1.0, 1.0)
    );
}
