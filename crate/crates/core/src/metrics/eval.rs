use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::detection::{iou, Detection, GroundTruth};
use crate::error::{check_range, Error, Result};

/// IoU thresholds whose mean mAP is reported as `map50_95c`.
pub const MAP_THRESHOLDS: [f64; 3] = [0.5, 0.75, 0.95];
/// Default minimum score for the precision/recall operating point.
pub const DEFAULT_SCORE_THRESHOLD: f64 = 0.25;

/// Predictions for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePredictions {
    pub image_id: String,
    pub detections: Vec<Detection>,
}

/// Ground truth for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTruths {
    pub image_id: String,
    pub truths: Vec<GroundTruth>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Thresholds averaged into `map50_95c`.
    pub iou_thresholds: Vec<f64>,
    /// Detections scoring below this are ignored for precision/recall.
    pub score_threshold: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            iou_thresholds: MAP_THRESHOLDS.to_vec(),
            score_threshold: DEFAULT_SCORE_THRESHOLD,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iou_thresholds.is_empty() {
            return Err(Error::Config(
                "at least one IoU threshold is required".into(),
            ));
        }
        for &t in &self.iou_thresholds {
            check_range("iou_threshold", t, 0.0, 1.0)?;
        }
        check_range("score_threshold", self.score_threshold, 0.0, 1.0)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassAp {
    pub class_id: u32,
    pub truths: usize,
    pub detections: usize,
    /// AP at each configured threshold, in configuration order.
    pub ap: Vec<f64>,
    pub ap50: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub precision: f64,
    pub recall: f64,
    pub map50: f64,
    pub map50_95c: f64,
    pub iou_thresholds: Vec<f64>,
    /// mAP at each configured threshold.
    pub map_per_threshold: Vec<f64>,
    pub per_class: Vec<ClassAp>,
    pub true_positives: usize,
    pub false_positives: usize,
    pub total_truths: usize,
    /// Predictions whose class has no ground truth anywhere.
    pub unknown_class_detections: usize,
}

/// A prediction tagged with its source image, ordered for ranking.
#[derive(Debug, Clone, Copy)]
pub struct RankedDetection<'a> {
    pub image_id: &'a str,
    pub detection: &'a Detection,
}

/// Ranking order: score descending, then smaller box area, then
/// lexicographic coordinates, then image id.
pub fn rank_order(a: &RankedDetection<'_>, b: &RankedDetection<'_>) -> Ordering {
    let (da, db) = (a.detection, b.detection);
    db.score()
        .total_cmp(&da.score())
        .then_with(|| da.bbox.area().total_cmp(&db.bbox.area()))
        .then_with(|| {
            da.bbox
                .coords()
                .iter()
                .zip(db.bbox.coords().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| a.image_id.cmp(b.image_id))
}

/// Area under the all-points interpolated precision/recall curve for a
/// ranked true/false-positive sequence.
///
/// Precision at each rank is replaced by the maximum precision at any
/// later rank; the area is the sum of these values at the true-positive
/// ranks divided by the number of truths.
pub fn average_precision(tp_flags: &[bool], n_truths: usize) -> f64 {
    if n_truths == 0 {
        return 0.0;
    }
    let mut precision = Vec::with_capacity(tp_flags.len());
    let mut tp = 0usize;
    for (k, &hit) in tp_flags.iter().enumerate() {
        tp += usize::from(hit);
        precision.push(tp as f64 / (k + 1) as f64);
    }
    for k in (0..precision.len().saturating_sub(1)).rev() {
        precision[k] = precision[k].max(precision[k + 1]);
    }
    let mut area = 0.0;
    for (k, &hit) in tp_flags.iter().enumerate() {
        if hit {
            area += precision[k];
        }
    }
    area / n_truths as f64
}

/// Greedy matching of ranked detections of one class: each detection takes
/// the unmatched truth of its image with the highest IoU (lowest index on
/// ties) when that IoU reaches `threshold`.
fn match_ranked(
    ranked: &[RankedDetection<'_>],
    truths: &BTreeMap<&str, Vec<&GroundTruth>>,
    threshold: f64,
) -> Vec<bool> {
    let mut used: BTreeMap<&str, Vec<bool>> = truths
        .iter()
        .map(|(id, t)| (*id, vec![false; t.len()]))
        .collect();
    ranked
        .iter()
        .map(|r| {
            let Some(cands) = truths.get(r.image_id) else {
                return false;
            };
            let taken = used.get_mut(r.image_id).expect("same keys");
            let mut best: Option<(usize, f64)> = None;
            for (i, t) in cands.iter().enumerate() {
                if taken[i] {
                    continue;
                }
                let o = iou(&r.detection.bbox, &t.bbox);
                if best.is_none_or(|(_, b)| o > b) {
                    best = Some((i, o));
                }
            }
            match best {
                Some((i, o)) if o >= threshold => {
                    taken[i] = true;
                    true
                }
                _ => false,
            }
        })
        .collect()
}

fn check_ids<'a>(ids: impl Iterator<Item = &'a str>, what: &str) -> Result<BTreeSet<&'a str>> {
    let mut set = BTreeSet::new();
    for id in ids {
        if !set.insert(id) {
            return Err(Error::Config(format!(
                "duplicate image_id {id:?} in {what}"
            )));
        }
    }
    Ok(set)
}

/// Evaluates detections against ground truth.
///
/// Both inputs must cover the same set of image ids. AP is computed per
/// class over the classes present in the ground truth; mAP is their mean.
/// Predictions of classes absent from the ground truth count as false
/// positives and emit a warning. Precision and recall use IoU 0.5 and the
/// detections scoring at least `config.score_threshold`.
pub fn evaluate_detections(
    predictions: &[ImagePredictions],
    truths: &[ImageTruths],
    config: &EvalConfig,
) -> Result<EvalResult> {
    config.validate()?;
    let pred_ids = check_ids(
        predictions.iter().map(|p| p.image_id.as_str()),
        "predictions",
    )?;
    let truth_ids = check_ids(truths.iter().map(|t| t.image_id.as_str()), "ground truth")?;
    if pred_ids != truth_ids {
        let missing: Vec<&&str> = truth_ids.difference(&pred_ids).collect();
        let extra: Vec<&&str> = pred_ids.difference(&truth_ids).collect();
        return Err(Error::Config(format!(
            "image_id sets differ: without predictions {missing:?}, without ground truth {extra:?}"
        )));
    }

    let mut truths_by_class: BTreeMap<u32, BTreeMap<&str, Vec<&GroundTruth>>> = BTreeMap::new();
    for img in truths {
        for t in &img.truths {
            truths_by_class
                .entry(t.class_id)
                .or_default()
                .entry(img.image_id.as_str())
                .or_default()
                .push(t);
        }
    }
    let mut ranked_by_class: BTreeMap<u32, Vec<RankedDetection<'_>>> = BTreeMap::new();
    let mut unknown = Vec::new();
    for img in predictions {
        for d in &img.detections {
            let r = RankedDetection {
                image_id: img.image_id.as_str(),
                detection: d,
            };
            if truths_by_class.contains_key(&d.class_id) {
                ranked_by_class.entry(d.class_id).or_default().push(r);
            } else {
                unknown.push(r);
            }
        }
    }
    for r in &unknown {
        log::warn!(
            "image {}: class {} has no ground truth; counted as a false positive",
            r.image_id,
            r.detection.class_id
        );
    }
    for list in ranked_by_class.values_mut() {
        list.sort_by(rank_order);
    }

    let mut per_class = Vec::new();
    let (mut tp, mut fp, mut total_truths) = (0usize, 0usize, 0usize);
    for (&class_id, class_truths) in &truths_by_class {
        let n_truths: usize = class_truths.values().map(Vec::len).sum();
        total_truths += n_truths;
        let ranked = ranked_by_class
            .get(&class_id)
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let ap: Vec<f64> = config
            .iou_thresholds
            .iter()
            .map(|&thr| average_precision(&match_ranked(ranked, class_truths, thr), n_truths))
            .collect();
        let flags50 = match_ranked(ranked, class_truths, 0.5);
        let ap50 = average_precision(&flags50, n_truths);
        // The score filter keeps a prefix of the ranking, so the prefix of
        // the full matching is the matching of the filtered set.
        for (r, &hit) in ranked.iter().zip(&flags50) {
            if r.detection.score() >= config.score_threshold {
                if hit {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        per_class.push(ClassAp {
            class_id,
            truths: n_truths,
            detections: ranked.len(),
            ap,
            ap50,
        });
    }
    fp += unknown
        .iter()
        .filter(|r| r.detection.score() >= config.score_threshold)
        .count();

    let mean_over_classes = |f: &dyn Fn(&ClassAp) -> f64| -> f64 {
        if per_class.is_empty() {
            0.0
        } else {
            per_class.iter().map(f).sum::<f64>() / per_class.len() as f64
        }
    };
    let map_per_threshold: Vec<f64> = (0..config.iou_thresholds.len())
        .map(|i| mean_over_classes(&|c: &ClassAp| c.ap[i]))
        .collect();
    let map50 = mean_over_classes(&|c: &ClassAp| c.ap50);
    let map50_95c = map_per_threshold.iter().sum::<f64>() / map_per_threshold.len() as f64;
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    Ok(EvalResult {
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, total_truths),
        map50,
        map50_95c,
        iou_thresholds: config.iou_thresholds.clone(),
        map_per_threshold,
        per_class,
        true_positives: tp,
        false_positives: fp,
        total_truths,
        unknown_class_detections: unknown.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::BoundingBox;

    fn bx(a: f64, b: f64, c: f64, d: f64) -> BoundingBox {
        BoundingBox::new(a, b, c, d).unwrap()
    }

    fn gt(b: BoundingBox, class_id: u32) -> GroundTruth {
        GroundTruth { bbox: b, class_id }
    }

    fn det(b: BoundingBox, class_id: u32, s: f64) -> Detection {
        Detection::new(b, class_id, s).unwrap()
    }

    #[test]
    fn perfect_predictions_score_one() {
        let truths = vec![
            ImageTruths {
                image_id: "a".into(),
                truths: vec![gt(bx(0.0, 0.0, 4.0, 4.0), 0), gt(bx(5.0, 5.0, 9.0, 8.0), 1)],
            },
            ImageTruths {
                image_id: "b".into(),
                truths: vec![gt(bx(1.0, 1.0, 2.0, 3.0), 0)],
            },
        ];
        let preds: Vec<ImagePredictions> = truths
            .iter()
            .map(|t| ImagePredictions {
                image_id: t.image_id.clone(),
                detections: t
                    .truths
                    .iter()
                    .map(|g| det(g.bbox, g.class_id, 1.0))
                    .collect(),
            })
            .collect();
        let r = evaluate_detections(&preds, &truths, &EvalConfig::default()).unwrap();
        assert_eq!(
            (r.precision, r.recall, r.map50, r.map50_95c),
            (1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn no_predictions_scores_zero() {
        let truths = vec![ImageTruths {
            image_id: "a".into(),
            truths: vec![gt(bx(0.0, 0.0, 4.0, 4.0), 0)],
        }];
        let preds = vec![ImagePredictions {
            image_id: "a".into(),
            detections: vec![],
        }];
        let r = evaluate_detections(&preds, &truths, &EvalConfig::default()).unwrap();
        assert_eq!(
            (r.precision, r.recall, r.map50, r.map50_95c),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn mismatched_ids_are_an_error() {
        let truths = vec![ImageTruths {
            image_id: "a".into(),
            truths: vec![],
        }];
        let preds = vec![ImagePredictions {
            image_id: "b".into(),
            detections: vec![],
        }];
        let err = evaluate_detections(&preds, &truths, &EvalConfig::default()).unwrap_err();
        assert!(err.to_string().contains("\"a\""));
    }

    #[test]
    fn ap_by_hand() {
        // TP, FP, TP with 3 truths: precisions 1, 1/2, 2/3 → envelope 1, 2/3, 2/3.
        let ap = average_precision(&[true, false, true], 3);
        assert!((ap - (1.0 + 2.0 / 3.0) / 3.0).abs() < 1e-15);
        assert_eq!(average_precision(&[], 2), 0.0);
    }

    #[test]
    fn unknown_class_is_false_positive() {
        let truths = vec![ImageTruths {
            image_id: "a".into(),
            truths: vec![gt(bx(0.0, 0.0, 4.0, 4.0), 0)],
        }];
        let preds = vec![ImagePredictions {
            image_id: "a".into(),
            detections: vec![
                det(bx(0.0, 0.0, 4.0, 4.0), 0, 0.9),
                det(bx(0.0, 0.0, 4.0, 4.0), 7, 0.9),
            ],
        }];
        let r = evaluate_detections(&preds, &truths, &EvalConfig::default()).unwrap();
        assert_eq!(r.unknown_class_detections, 1);
        assert_eq!(r.precision, 0.5);
        assert_eq!(r.map50, 1.0);
    }

    #[test]
    fn duplicate_is_false_positive() {
        let truths = vec![ImageTruths {
            image_id: "a".into(),
            truths: vec![gt(bx(0.0, 0.0, 4.0, 4.0), 0)],
        }];
        let preds = vec![ImagePredictions {
            image_id: "a".into(),
            detections: vec![
                det(bx(0.0, 0.0, 4.0, 4.0), 0, 0.9),
                det(bx(0.0, 0.0, 4.0, 4.0), 0, 0.8),
            ],
        }];
        let r = evaluate_detections(&preds, &truths, &EvalConfig::default()).unwrap();
        assert_eq!((r.true_positives, r.false_positives), (1, 1));
        assert_eq!(r.map50, 1.0);
    }
}
