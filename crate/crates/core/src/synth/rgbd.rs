use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::{self, decode_png_dynamic};
use crate::optics::{DepthMap, PlanarImage};

/// A clean RGB image and its depth map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbdRecord {
    pub id: String,
    pub image_path: PathBuf,
    pub depth_path: PathBuf,
}

/// How depth files are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthEncoding {
    /// 16-bit PNG holding millimeters.
    #[default]
    Millimeters16,
    /// Float map (`.fmap` or `.pfm`) holding meters.
    MetersFloat,
}

impl FromStr for DepthEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mm16" | "mm" | "millimeters" => Ok(DepthEncoding::Millimeters16),
            "meters" | "float" | "meters-float" => Ok(DepthEncoding::MetersFloat),
            _ => Err(Error::Config(format!("unknown depth encoding {s:?}"))),
        }
    }
}

impl DepthEncoding {
    pub fn name(self) -> &'static str {
        match self {
            DepthEncoding::Millimeters16 => "mm16",
            DepthEncoding::MetersFloat => "meters-float",
        }
    }
}

fn id_from_path(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .ok_or_else(|| Error::Config(format!("{}: no usable file stem", path.display())))
}

/// Parses a listing with one `image_path<TAB>depth_path` pair per line.
///
/// Relative paths are resolved against `base`. Blank lines and lines
/// starting with `#` are skipped. The record id is the image file stem and
/// must be unique.
pub fn parse_listing(text: &str, base: &Path) -> Result<Vec<RgbdRecord>> {
    let mut records = Vec::new();
    let mut seen = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(image), Some(depth), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Config(format!(
                "listing line {}: expected image<TAB>depth",
                lineno + 1
            )));
        };
        let (image, depth) = (image.trim(), depth.trim());
        if image.is_empty() || depth.is_empty() {
            return Err(Error::Config(format!(
                "listing line {}: empty path",
                lineno + 1
            )));
        }
        let image_path = base.join(image);
        let id = id_from_path(&image_path)?;
        if let Some(prev) = seen.insert(id.clone(), lineno + 1) {
            return Err(Error::Config(format!(
                "listing line {}: id {id:?} already used on line {prev}",
                lineno + 1
            )));
        }
        records.push(RgbdRecord {
            id,
            image_path,
            depth_path: base.join(depth),
        });
    }
    Ok(records)
}

fn list_files(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        if !matches!(
            io::extension(&path).as_deref(),
            Some("png" | "fmap" | "pfm")
        ) {
            continue;
        }
        let id = id_from_path(&path)?;
        if let Some(prev) = out.insert(id.clone(), path.clone()) {
            return Err(Error::Config(format!(
                "{} and {} share the stem {id:?}",
                prev.display(),
                path.display()
            )));
        }
    }
    Ok(out)
}

/// Pairs `root/rgb/<stem>.png` with `root/depth/<stem>.*` by file stem.
/// Unpaired files are an error. Records are sorted by id.
pub fn scan_directory(root: &Path) -> Result<Vec<RgbdRecord>> {
    let images = list_files(&root.join("rgb"))?;
    let depths = list_files(&root.join("depth"))?;
    let unpaired: Vec<&String> = images
        .keys()
        .filter(|k| !depths.contains_key(*k))
        .chain(depths.keys().filter(|k| !images.contains_key(*k)))
        .collect();
    if !unpaired.is_empty() {
        return Err(Error::Config(format!("unpaired stems: {unpaired:?}")));
    }
    Ok(images
        .into_iter()
        .map(|(id, image_path)| RgbdRecord {
            depth_path: depths[&id].clone(),
            id,
            image_path,
        })
        .collect())
}

/// Accepts either a listing file or a directory with `rgb/` and `depth/`.
pub fn discover_inputs(input: &Path) -> Result<Vec<RgbdRecord>> {
    if input.is_dir() {
        scan_directory(input)
    } else {
        let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
        let base = input.parent().unwrap_or(Path::new("."));
        parse_listing(&text, base)
    }
}

/// Decodes a depth file into meters.
pub fn decode_depth(bytes: &[u8], path: &Path, encoding: DepthEncoding) -> Result<DepthMap> {
    let img = match encoding {
        DepthEncoding::Millimeters16 => {
            if io::extension(path).as_deref() != Some("png") {
                return Err(Error::Decode(format!(
                    "{}: millimeter depth must be a 16-bit PNG",
                    path.display()
                )));
            }
            let dynamic = decode_png_dynamic(bytes)?;
            let (w, h) = (dynamic.width() as usize, dynamic.height() as usize);
            if !matches!(dynamic, image::DynamicImage::ImageLuma16(_)) {
                return Err(Error::Decode(format!(
                    "{}: expected 16-bit grayscale depth, got {:?}",
                    path.display(),
                    dynamic.color()
                )));
            }
            let mm = dynamic.to_luma16().into_raw();
            PlanarImage::new(
                h,
                w,
                1,
                mm.into_iter().map(|v| f64::from(v) / 1000.0).collect(),
            )?
        }
        DepthEncoding::MetersFloat => {
            let img = io::decode_by_extension(bytes, path)?;
            if img.channels() != 1 {
                return Err(Error::Decode(format!(
                    "{}: depth map must have one channel",
                    path.display()
                )));
            }
            img
        }
    };
    DepthMap::new(img).map_err(|e| Error::Decode(format!("{}: {e}", path.display())))
}

/// Loads the clean image (3 channels, `[0, 1]`) and the depth map of a
/// record, checking that their sizes agree.
pub fn load_record(
    record: &RgbdRecord,
    encoding: DepthEncoding,
) -> Result<(PlanarImage, DepthMap)> {
    let clean = io::read_image(&record.image_path)?;
    if clean.channels() != 3 {
        return Err(Error::Decode(format!(
            "{}: clean image must be RGB",
            record.image_path.display()
        )));
    }
    let bytes = std::fs::read(&record.depth_path).map_err(|e| Error::io(&record.depth_path, e))?;
    let depth = decode_depth(&bytes, &record.depth_path, encoding)?;
    if !clean.same_extent(depth.image()) {
        return Err(Error::Shape(format!(
            "{}: image {}x{} vs depth {}x{}",
            record.id,
            clean.height(),
            clean.width(),
            depth.height(),
            depth.width()
        )));
    }
    Ok((clean, depth))
}
