//! Detection-side geometry and objectives: anchor-free box decoding, IoU,
//! CIoU regression, BCE classification, task alignment and the weighted
//! detection / joint objectives.

mod boxes;
mod ciou;
mod classify;
mod files;
mod objective;

pub use boxes::{decode_ltrb, iou, BoundingBox, Detection, GroundTruth, LtrbDistances};
pub use ciou::{ciou_loss, CiouLoss};
pub use classify::{bce_classification_loss, sigmoid, ClassificationLoss};
pub use files::{parse_box_list, parse_value_list};
pub use objective::{detection_loss, task_alignment, total_loss, AlignmentParams, DetectWeights};
