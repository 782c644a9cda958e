use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Axis-aligned box in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct BoundingBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        let all_finite = [x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite());
        if !all_finite || x_min > x_max || y_min > y_max {
            return Err(Error::Domain(format!(
                "invalid box ({x_min}, {y_min}, {x_max}, {y_max})"
            )));
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x_min, self.y_min, self.x_max, self.y_max]
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> [f64; 2] {
        [
            (self.x_min + self.x_max) * 0.5,
            (self.y_min + self.y_max) * 0.5,
        ]
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.x_min * k,
            self.y_min * k,
            self.x_max * k,
            self.y_max * k,
        )
    }
}

impl TryFrom<[f64; 4]> for BoundingBox {
    type Error = Error;

    fn try_from(c: [f64; 4]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl From<BoundingBox> for [f64; 4] {
    fn from(b: BoundingBox) -> Self {
        b.coords()
    }
}

/// Distances from an anchor point to the four box sides, in units of the
/// feature-map stride.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtrbDistances {
    pub left: f64,
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    /// Anchor `[x, y]` in image pixels.
    pub anchor: [f64; 2],
    pub stride: f64,
}

impl LtrbDistances {
    pub fn new(
        left: f64,
        top: f64,
        right: f64,
        bottom: f64,
        anchor: [f64; 2],
        stride: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("left", left),
            ("top", top),
            ("right", right),
            ("bottom", bottom),
        ] {
            check_range(name, v, 0.0, f64::MAX)?;
        }
        check_range("stride", stride, 0.0, f64::MAX)?;
        if !(anchor[0].is_finite() && anchor[1].is_finite()) {
            return Err(Error::Domain(format!("anchor {anchor:?} not finite")));
        }
        Ok(Self {
            left,
            top,
            right,
            bottom,
            anchor,
            stride,
        })
    }
}

/// Box whose sides lie `distance × stride` pixels from the anchor.
pub fn decode_ltrb(d: &LtrbDistances) -> Result<BoundingBox> {
    let [ax, ay] = d.anchor;
    BoundingBox::new(
        ax - d.left * d.stride,
        ay - d.top * d.stride,
        ax + d.right * d.stride,
        ay + d.bottom * d.stride,
    )
}

/// Intersection over union; 0 when the union is empty.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let iw = (a.x_max.min(b.x_max) - a.x_min.max(b.x_min)).max(0.0);
    let ih = (a.y_max.min(b.y_max) - a.y_min.max(b.y_min)).max(0.0);
    let inter = iw * ih;
    let union = a.area() + b.area() - inter;
    if union > 0.0 {
        (inter / union).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// A scored, classified box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub bbox: BoundingBox,
    pub class_id: u32,
    score: f64,
}

impl Detection {
    pub fn new(bbox: BoundingBox, class_id: u32, score: f64) -> Result<Self> {
        check_range("score", score, 0.0, 1.0)?;
        Ok(Self {
            bbox,
            class_id,
            score,
        })
    }

    pub fn score(&self) -> f64 {
        self.score
    }
}

/// A labelled ground-truth box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    pub bbox: BoundingBox,
    pub class_id: u32,
}
