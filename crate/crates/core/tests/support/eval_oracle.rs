//! Exhaustive detection evaluator used as an oracle: every prefix of the
//! ranking is re-matched from scratch and IoU is counted on a pixel grid.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use aquasim::detection::{BoundingBox, Detection, GroundTruth};
use aquasim::metrics::{ImagePredictions, ImageTruths};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// IoU of integer-cornered boxes by counting covered unit cells.
pub fn raster_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let cells = |bx: &BoundingBox| {
        let [x0, y0, x1, y1] = bx.coords().map(|v| v as i64);
        let mut s = BTreeSet::new();
        for y in y0..y1 {
            for x in x0..x1 {
                s.insert((x, y));
            }
        }
        s
    };
    let (ca, cb) = (cells(a), cells(b));
    let inter = ca.intersection(&cb).count();
    let union = ca.union(&cb).count();
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

struct Ranked {
    image: String,
    det: Detection,
}

fn sort_key(r: &Ranked) -> (std::cmp::Reverse<u64>, u64, [u64; 4], String) {
    // Scores and coordinates are nonnegative, so their bit patterns sort
    // like the values.
    (
        std::cmp::Reverse(r.det.score().to_bits()),
        r.det.bbox.area().to_bits(),
        r.det.bbox.coords().map(f64::to_bits),
        r.image.clone(),
    )
}

/// True-positive flags of the first `k` ranked detections, matched greedily.
fn match_prefix(
    ranked: &[Ranked],
    truths: &BTreeMap<String, Vec<BoundingBox>>,
    k: usize,
    thr: f64,
) -> Vec<bool> {
    let mut used: BTreeMap<&str, Vec<bool>> = truths
        .iter()
        .map(|(k, v)| (k.as_str(), vec![false; v.len()]))
        .collect();
    let mut out = Vec::new();
    for r in &ranked[..k] {
        let Some(cands) = truths.get(&r.image) else {
            out.push(false);
            continue;
        };
        let taken = used.get_mut(r.image.as_str()).unwrap();
        let mut best: Option<(usize, f64)> = None;
        for (i, t) in cands.iter().enumerate() {
            let o = raster_iou(&r.det.bbox, t);
            if !taken[i] && best.is_none_or(|(_, b)| o > b) {
                best = Some((i, o));
            }
        }
        match best {
            Some((i, o)) if o >= thr => {
                taken[i] = true;
                out.push(true);
            }
            _ => out.push(false),
        }
    }
    out
}

fn ap(ranked: &[Ranked], truths: &BTreeMap<String, Vec<BoundingBox>>, thr: f64) -> f64 {
    let n: usize = truths.values().map(Vec::len).sum();
    let mut prec = Vec::new();
    let mut rec = Vec::new();
    for k in 1..=ranked.len() {
        let tp = match_prefix(ranked, truths, k, thr)
            .iter()
            .filter(|&&h| h)
            .count();
        prec.push(tp as f64 / k as f64);
        rec.push(tp as f64 / n as f64);
    }
    let mut area = 0.0;
    let mut prev = 0.0;
    for k in 0..rec.len() {
        let envelope = prec[k..].iter().cloned().fold(0.0, f64::max);
        area += (rec[k] - prev) * envelope;
        prev = rec[k];
    }
    area
}

#[derive(Debug)]
pub struct OracleResult {
    pub precision: f64,
    pub recall: f64,
    pub map: Vec<f64>,
    pub map50: f64,
}

pub fn evaluate(
    preds: &[ImagePredictions],
    truths: &[ImageTruths],
    thresholds: &[f64],
    score_thr: f64,
) -> OracleResult {
    let mut by_class: BTreeMap<u32, BTreeMap<String, Vec<BoundingBox>>> = BTreeMap::new();
    for img in truths {
        for t in &img.truths {
            by_class
                .entry(t.class_id)
                .or_default()
                .entry(img.image_id.clone())
                .or_default()
                .push(t.bbox);
        }
    }
    let ranked_for = |class: u32, min_score: f64| {
        let mut v: Vec<Ranked> = preds
            .iter()
            .flat_map(|p| {
                p.detections
                    .iter()
                    .filter(|d| d.class_id == class && d.score() >= min_score)
                    .map(|d| Ranked {
                        image: p.image_id.clone(),
                        det: *d,
                    })
            })
            .collect();
        v.sort_by_key(sort_key);
        v
    };
    let classes = by_class.len().max(1) as f64;
    let map: Vec<f64> = thresholds
        .iter()
        .map(|&thr| {
            by_class
                .iter()
                .map(|(&c, t)| ap(&ranked_for(c, 0.0), t, thr))
                .sum::<f64>()
                / classes
        })
        .collect();
    let map50 = by_class
        .iter()
        .map(|(&c, t)| ap(&ranked_for(c, 0.0), t, 0.5))
        .sum::<f64>()
        / classes;

    let (mut tp, mut kept) = (0usize, 0usize);
    for (&c, t) in &by_class {
        let ranked = ranked_for(c, score_thr);
        tp += match_prefix(&ranked, t, ranked.len(), 0.5)
            .iter()
            .filter(|&&h| h)
            .count();
        kept += ranked.len();
    }
    kept += preds
        .iter()
        .flat_map(|p| &p.detections)
        .filter(|d| !by_class.contains_key(&d.class_id) && d.score() >= score_thr)
        .count();
    let n_truths: usize = by_class
        .values()
        .flat_map(|m| m.values())
        .map(Vec::len)
        .sum();
    OracleResult {
        precision: if kept == 0 {
            0.0
        } else {
            tp as f64 / kept as f64
        },
        recall: if n_truths == 0 {
            0.0
        } else {
            tp as f64 / n_truths as f64
        },
        map,
        map50,
    }
}

fn int_box(r: &mut ChaCha8Rng) -> BoundingBox {
    let x = r.random_range(0..16) as f64;
    let y = r.random_range(0..16) as f64;
    let w = r.random_range(1..8) as f64;
    let h = r.random_range(1..8) as f64;
    BoundingBox::new(x, y, x + w, y + h).unwrap()
}

fn jitter(r: &mut ChaCha8Rng, b: &BoundingBox) -> BoundingBox {
    let [x0, y0, x1, y1] = b.coords();
    let d = |r: &mut ChaCha8Rng| r.random_range(-1i32..=1) as f64;
    let (nx0, ny0) = ((x0 + d(r)).max(0.0), (y0 + d(r)).max(0.0));
    let (nx1, ny1) = ((x1 + d(r)).max(nx0 + 1.0), (y1 + d(r)).max(ny0 + 1.0));
    BoundingBox::new(nx0, ny0, nx1, ny1).unwrap()
}

/// Most boxes (truths plus predictions) in one toy scene.
pub const MAX_BOXES: usize = 6;

/// A toy scene of up to three images and at most [`MAX_BOXES`] integer
/// boxes, with coarse scores so ranking ties and duplicate detections occur.
pub fn toy_scene(r: &mut ChaCha8Rng) -> (Vec<ImagePredictions>, Vec<ImageTruths>) {
    let images = r.random_range(1..4);
    let ids: Vec<String> = (0..images).map(|i| format!("img{i:02}")).collect();
    let mut truths: Vec<ImageTruths> = ids
        .iter()
        .map(|id| ImageTruths {
            image_id: id.clone(),
            truths: Vec::new(),
        })
        .collect();
    let mut preds: Vec<ImagePredictions> = ids
        .iter()
        .map(|id| ImagePredictions {
            image_id: id.clone(),
            detections: Vec::new(),
        })
        .collect();
    let n_truths = r.random_range(0..=3);
    let n_preds = r.random_range(0..=MAX_BOXES - n_truths);
    for _ in 0..n_truths {
        let img = r.random_range(0..images);
        let g = GroundTruth {
            bbox: int_box(r),
            class_id: r.random_range(0..3),
        };
        truths[img].truths.push(g);
    }
    let all: Vec<(usize, GroundTruth)> = truths
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.truths.iter().map(move |g| (i, *g)))
        .collect();
    for _ in 0..n_preds {
        let score = r.random_range(0..=10) as f64 / 10.0;
        let (img, det) = if !all.is_empty() && r.random_bool(0.7) {
            let (img, g) = all[r.random_range(0..all.len())];
            let class = if r.random_bool(0.85) {
                g.class_id
            } else {
                r.random_range(0..4)
            };
            (
                img,
                Detection::new(jitter(r, &g.bbox), class, score).unwrap(),
            )
        } else {
            (
                r.random_range(0..images),
                Detection::new(int_box(r), r.random_range(0..4), score).unwrap(),
            )
        };
        preds[img].detections.push(det);
    }
    (preds, truths)
}
