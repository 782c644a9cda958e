use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::{self, MapFormat};
use crate::optics::{compose_underwater, Composite, DepthMap, OpticalScene, PlanarImage};

use super::rgbd::{load_record, DepthEncoding, RgbdRecord};
use super::sampler::{sample_scene, SamplerConfig};
use super::sidecar::SceneSidecar;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_VERSION: u32 = 1;

/// One synthesized sample with every ground-truth map.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthRecord {
    pub id: String,
    pub seed: u64,
    pub record_index: u64,
    pub scene: OpticalScene,
    pub maps: Composite,
}

impl SynthRecord {
    pub fn sidecar(&self) -> SceneSidecar {
        SceneSidecar::from_scene(&self.scene, self.seed, self.record_index)
    }
}

/// Degrades an already-decoded clean/depth pair under `scene`.
pub fn synthesize(
    id: &str,
    clean: &PlanarImage,
    depth: &DepthMap,
    scene: &OpticalScene,
    seed: u64,
    record_index: u64,
) -> Result<SynthRecord> {
    Ok(SynthRecord {
        id: id.to_string(),
        seed,
        record_index,
        scene: *scene,
        maps: compose_underwater(clean, scene, depth)?,
    })
}

/// Loads an RGB-D record from disk and degrades it under `scene`.
pub fn synthesize_record(
    record: &RgbdRecord,
    encoding: DepthEncoding,
    scene: &OpticalScene,
    seed: u64,
    record_index: u64,
) -> Result<SynthRecord> {
    let (clean, depth) = load_record(record, encoding)?;
    synthesize(&record.id, &clean, &depth, scene, seed, record_index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetOptions {
    pub map_format: MapFormat,
    /// Also write lossless `.fmap` copies of `I` and `J`.
    pub float_export: bool,
    pub depth_encoding: DepthEncoding,
    /// Worker threads; 0 picks the rayon default.
    pub workers: usize,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            map_format: MapFormat::Fmap,
            float_export: false,
            depth_encoding: DepthEncoding::Millimeters16,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileChecksum {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub id: String,
    pub record_index: u64,
    pub files: Vec<FileChecksum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub seed: u64,
    pub map_format: String,
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("manifest serialises");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let m: Manifest = serde_json::from_slice(bytes)?;
        if m.version != MANIFEST_VERSION {
            return Err(Error::Decode(format!(
                "unsupported manifest version {}",
                m.version
            )));
        }
        for r in &m.records {
            for f in &r.files {
                if !is_plain_file_name(&f.name) {
                    return Err(Error::Decode(format!(
                        "manifest entry {:?} is not a plain file name",
                        f.name
                    )));
                }
            }
        }
        Ok(m)
    }
}

// Manifest entries must stay inside the dataset directory.
fn is_plain_file_name(name: &str) -> bool {
    !name.is_empty()
        && name != "."
        && name != ".."
        && !name.contains(['/', '\\'])
        && Path::new(name)
            .file_name()
            .map(|n| n == name)
            .unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordFailure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetReport {
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
    pub failures: Vec<RecordFailure>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Encodes every output file of one record as `(file name, bytes)`.
pub fn render_files(
    record: &SynthRecord,
    options: &DatasetOptions,
) -> Result<Vec<(String, Vec<u8>)>> {
    let id = &record.id;
    let ext = options.map_format.extension();
    let mut files = vec![
        (
            format!("{id}_uw.png"),
            io::encode_png8(&record.maps.underwater)?,
        ),
        (
            format!("{id}_clean.png"),
            io::encode_png8(&record.maps.relit)?,
        ),
        (
            format!("{id}_B.{ext}"),
            options.map_format.encode(&record.maps.background)?,
        ),
        (
            format!("{id}_t.{ext}"),
            options
                .map_format
                .encode(record.maps.transmission.image())?,
        ),
    ];
    if options.float_export {
        files.push((
            format!("{id}_uw.fmap"),
            io::fmap::encode(&record.maps.underwater),
        ));
        files.push((
            format!("{id}_clean.fmap"),
            io::fmap::encode(&record.maps.relit),
        ));
    }
    files.push((format!("{id}.json"), record.sidecar().to_json()));
    Ok(files)
}

fn write_record(
    record: &SynthRecord,
    out_dir: &Path,
    options: &DatasetOptions,
) -> Result<ManifestRecord> {
    let mut files = Vec::new();
    for (name, bytes) in render_files(record, options)? {
        io::write_bytes(&out_dir.join(&name), &bytes)?;
        files.push(FileChecksum {
            sha256: sha256_hex(&bytes),
            name,
        });
    }
    Ok(ManifestRecord {
        id: record.id.clone(),
        record_index: record.record_index,
        files,
    })
}

fn finish(
    out_dir: &Path,
    seed: u64,
    options: &DatasetOptions,
    outcomes: Vec<std::result::Result<ManifestRecord, RecordFailure>>,
) -> Result<DatasetReport> {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        seed,
        map_format: options.map_format.extension().to_string(),
        records,
    };
    let manifest_path = out_dir.join(MANIFEST_FILE);
    io::write_bytes(&manifest_path, &manifest.to_json())?;
    Ok(DatasetReport {
        manifest_path,
        manifest,
        failures,
    })
}

fn ensure_dir(out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))
}

/// Writes already-synthesized records plus the manifest. Per-record I/O
/// failures are collected, not fatal.
pub fn write_dataset(
    records: &[SynthRecord],
    seed: u64,
    out_dir: &Path,
    options: &DatasetOptions,
) -> Result<DatasetReport> {
    ensure_dir(out_dir)?;
    let outcomes = records
        .iter()
        .map(|r| {
            write_record(r, out_dir, options).map_err(|e| RecordFailure {
                id: r.id.clone(),
                error: e.to_string(),
            })
        })
        .collect();
    finish(out_dir, seed, options, outcomes)
}

/// Full pipeline: load, sample, degrade and write every input, in parallel.
///
/// Output bytes depend only on the inputs and `config`; the worker count
/// and scheduling order have no effect.
pub fn generate_dataset(
    inputs: &[RgbdRecord],
    config: &SamplerConfig,
    out_dir: &Path,
    options: &DatasetOptions,
) -> Result<DatasetReport> {
    config.validate()?;
    ensure_dir(out_dir)?;
    let process = |(index, input): (usize, &RgbdRecord)| {
        let index = index as u64;
        let run = || -> Result<ManifestRecord> {
            let (clean, depth) = load_record(input, options.depth_encoding)?;
            let scene = sample_scene(config, index, clean.height(), clean.width())?;
            let record = synthesize(&input.id, &clean, &depth, &scene, config.seed, index)?;
            write_record(&record, out_dir, options)
        };
        run().map_err(|e| {
            log::warn!("record {}: {e}", input.id);
            RecordFailure {
                id: input.id.clone(),
                error: e.to_string(),
            }
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes = pool.install(|| inputs.par_iter().enumerate().map(process).collect());
    finish(out_dir, config.seed, options, outcomes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    pub id: String,
    pub file: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub records: usize,
    pub files: usize,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes every checksum listed in `dir/manifest.json`.
pub fn verify_dataset(dir: &Path) -> Result<VerifyReport> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let bytes = std::fs::read(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let manifest = Manifest::from_json(&bytes)?;
    let mut report = VerifyReport {
        records: manifest.records.len(),
        files: 0,
        failures: Vec::new(),
    };
    for record in &manifest.records {
        for file in &record.files {
            report.files += 1;
            let reason = match std::fs::read(dir.join(&file.name)) {
                Err(e) => Some(format!("unreadable: {e}")),
                Ok(data) => {
                    let actual = sha256_hex(&data);
                    (actual != file.sha256).then(|| format!("checksum {actual} != {}", file.sha256))
                }
            };
            if let Some(reason) = reason {
                report.failures.push(VerifyFailure {
                    id: record.id.clone(),
                    file: file.name.clone(),
                    reason,
                });
            }
        }
    }
    Ok(report)
}
