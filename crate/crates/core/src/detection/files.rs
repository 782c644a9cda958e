//! JSON inputs for checking detection losses on files.
//!
//! Box lists: `[{"x_min": .., "y_min": .., "x_max": .., "y_max": .., "class": .., "score": ..}]`
//! with `class` and `score` optional. Value lists: a flat array of numbers.

use serde::Deserialize;

use crate::error::Result;

use super::BoundingBox;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxEntry {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
    #[serde(default, rename = "class")]
    _class: Option<u32>,
    #[serde(default, rename = "score")]
    _score: Option<f64>,
}

pub fn parse_box_list(bytes: &[u8]) -> Result<Vec<BoundingBox>> {
    let entries: Vec<BoxEntry> = serde_json::from_slice(bytes)?;
    entries
        .into_iter()
        .map(|e| BoundingBox::new(e.x_min, e.y_min, e.x_max, e.y_max))
        .collect()
}

pub fn parse_value_list(bytes: &[u8]) -> Result<Vec<f64>> {
    Ok(serde_json::from_slice(bytes)?)
}
