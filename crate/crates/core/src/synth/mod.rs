//! Reproducible synthetic dataset generation from RGB-D inputs.
//!
//! Each record draws its scene from an independent counter-based stream
//! keyed by `(seed, record_index)`, so output bytes do not depend on
//! processing order or worker count.

mod dataset;
mod procedural;
mod rgbd;
mod sampler;
mod sidecar;

pub use dataset::{
    generate_dataset, render_files, sha256_hex, synthesize, synthesize_record, verify_dataset,
    write_dataset, DatasetOptions, DatasetReport, FileChecksum, Manifest, ManifestRecord,
    RecordFailure, SynthRecord, VerifyFailure, VerifyReport, MANIFEST_FILE,
};
pub use procedural::{procedural_rgbd, write_rgbd_pair};
pub use rgbd::{
    decode_depth, discover_inputs, load_record, parse_listing, scan_directory, DepthEncoding,
    RgbdRecord,
};
pub use sampler::{record_rng, sample_scene, SamplerConfig, SceneOverrides};
pub use sidecar::SceneSidecar;
