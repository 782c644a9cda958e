//! Physically based underwater image synthesis and the supporting math
//! for training and evaluating joint enhancement/detection models.
//!
//! The crate is organised around the forward imaging model
//! `I = t·J + (1 − t)·B`:
//!
//! - [`optics`] – transmission, illumination, background light, forward
//!   composition and exact inversion.
//! - [`synth`] – seeded scene sampling, RGB-D ingestion and reproducible
//!   paired dataset export with checksummed manifests.
//! - [`losses`] – enhancement losses with hand-derived gradients.
//! - [`detection`] – box geometry, CIoU, BCE, task alignment and the
//!   combined objectives.
//! - [`metrics`] – UIQM, UCIQE and detection mAP evaluation.
//! - [`baseline`] – prior-based background/transmission estimators for
//!   enhancing images without a learned model.
//! - [`io`] – float-map, PFM and PNG codecs.
//! - [`gradcheck`] – finite-difference checks of analytic gradients.

pub mod baseline;
pub mod detection;
pub mod error;
pub mod filters;
pub mod gradcheck;
pub mod io;
pub mod losses;
pub mod metrics;
pub mod optics;
pub mod synth;

pub use error::{Error, Result};
pub use optics::{DepthMap, PlanarImage, TransmissionMap, WaterType};
