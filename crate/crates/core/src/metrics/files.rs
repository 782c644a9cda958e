//! Per-image detection JSON:
//! `{"image_id": str, "detections": [{"bbox": [x_min, y_min, x_max, y_max], "class": int, "score": float}]}`.
//! Ground-truth files have the same layout without `score`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detection::{BoundingBox, Detection, GroundTruth};
use crate::error::{Error, Result};

use super::eval::{ImagePredictions, ImageTruths};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredictionEntry {
    bbox: BoundingBox,
    class: u32,
    score: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TruthEntry {
    bbox: BoundingBox,
    class: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageFile<T> {
    image_id: String,
    detections: Vec<T>,
}

fn check_id(id: &str) -> Result<()> {
    if id.is_empty() {
        return Err(Error::Decode("image_id must not be empty".into()));
    }
    Ok(())
}

pub fn parse_predictions(bytes: &[u8]) -> Result<ImagePredictions> {
    let file: ImageFile<PredictionEntry> = serde_json::from_slice(bytes)?;
    check_id(&file.image_id)?;
    let detections = file
        .detections
        .into_iter()
        .map(|e| Detection::new(e.bbox, e.class, e.score))
        .collect::<Result<_>>()?;
    Ok(ImagePredictions {
        image_id: file.image_id,
        detections,
    })
}

pub fn parse_truths(bytes: &[u8]) -> Result<ImageTruths> {
    let file: ImageFile<TruthEntry> = serde_json::from_slice(bytes)?;
    check_id(&file.image_id)?;
    Ok(ImageTruths {
        image_id: file.image_id,
        truths: file
            .detections
            .into_iter()
            .map(|e| GroundTruth {
                bbox: e.bbox,
                class_id: e.class,
            })
            .collect(),
    })
}

pub fn predictions_to_json(p: &ImagePredictions) -> Vec<u8> {
    let file = ImageFile {
        image_id: p.image_id.clone(),
        detections: p
            .detections
            .iter()
            .map(|d| PredictionEntry {
                bbox: d.bbox,
                class: d.class_id,
                score: d.score(),
            })
            .collect(),
    };
    serde_json::to_vec(&file).expect("predictions serialise")
}

pub fn truths_to_json(t: &ImageTruths) -> Vec<u8> {
    let file = ImageFile {
        image_id: t.image_id.clone(),
        detections: t
            .truths
            .iter()
            .map(|g| TruthEntry {
                bbox: g.bbox,
                class: g.class_id,
            })
            .collect(),
    };
    serde_json::to_vec(&file).expect("truths serialise")
}

/// `*.json` files directly inside `dir`, sorted by path.
pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file()
            && path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn read_dir_with<T>(dir: &Path, parse: fn(&[u8]) -> Result<T>) -> Result<Vec<T>> {
    json_files(dir)?
        .into_iter()
        .map(|p| {
            let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
            parse(&bytes).map_err(|e| Error::Decode(format!("{}: {e}", p.display())))
        })
        .collect()
}

pub fn read_prediction_dir(dir: &Path) -> Result<Vec<ImagePredictions>> {
    read_dir_with(dir, parse_predictions)
}

pub fn read_truth_dir(dir: &Path) -> Result<Vec<ImageTruths>> {
    read_dir_with(dir, parse_truths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = br#"{"image_id":"im1","detections":[{"bbox":[1.0,2.0,3.5,4.0],"class":2,"score":0.75}]}"#;
        let p = parse_predictions(text).unwrap();
        assert_eq!(p.detections[0].bbox.coords(), [1.0, 2.0, 3.5, 4.0]);
        assert_eq!(parse_predictions(&predictions_to_json(&p)).unwrap(), p);

        let t = parse_truths(br#"{"image_id":"im1","detections":[{"bbox":[0,0,1,1],"class":0}]}"#)
            .unwrap();
        assert_eq!(parse_truths(&truths_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            &br#"{"image_id":"a","detections":[{"bbox":[3,0,1,1],"class":0,"score":0.5}]}"#[..],
            br#"{"image_id":"a","detections":[{"bbox":[0,0,1,1],"class":0,"score":1.5}]}"#,
            br#"{"image_id":"a","detections":[{"bbox":[0,0,1],"class":0,"score":0.5}]}"#,
            br#"{"image_id":"a","detections":[{"bbox":[0,0,1,1],"class":-1,"score":0.5}]}"#,
            br#"{"image_id":"","detections":[]}"#,
            br#"{"image_id":"a"}"#,
            b"[]",
        ] {
            assert!(
                parse_predictions(bad).is_err(),
                "{}",
                String::from_utf8_lossy(bad)
            );
        }
        assert!(parse_truths(
            br#"{"image_id":"a","detections":[{"bbox":[0,0,1,1],"class":0,"score":0.5}]}"#
        )
        .is_err());
    }
}
