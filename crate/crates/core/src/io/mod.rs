//! Image and float-map codecs.
//!
//! PNG pixels are mapped to `[0, 1]` (8-bit `/255`, 16-bit `/65535`) and
//! clamped/quantised on the way out. `.fmap` stores `f64` losslessly; `.pfm`
//! stores `f32`.

pub mod fmap;
pub mod pfm;

use std::io::Cursor;
use std::path::Path;
use std::str::FromStr;

use image::{DynamicImage, ImageBuffer, ImageFormat, Luma, Rgb};

use crate::error::{Error, Result};
use crate::optics::PlanarImage;

/// On-disk encoding for float maps such as `B` and `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MapFormat {
    /// Lossless `f64` container.
    #[default]
    Fmap,
    /// `f32` Portable Float Map.
    Pfm,
    /// 16-bit PNG, clamped to `[0, 1]`.
    Png16,
}

impl MapFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MapFormat::Fmap => "fmap",
            MapFormat::Pfm => "pfm",
            MapFormat::Png16 => "png",
        }
    }

    pub fn encode(self, img: &PlanarImage) -> Result<Vec<u8>> {
        match self {
            MapFormat::Fmap => Ok(fmap::encode(img)),
            MapFormat::Pfm => Ok(pfm::encode(img)),
            MapFormat::Png16 => encode_png16(img),
        }
    }
}

impl FromStr for MapFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fmap" | "float" => Ok(MapFormat::Fmap),
            "pfm" => Ok(MapFormat::Pfm),
            "png16" | "png" => Ok(MapFormat::Png16),
            _ => Err(Error::Config(format!("unknown map format {s:?}"))),
        }
    }
}

fn quantize(v: f64, max: f64) -> f64 {
    (v.clamp(0.0, 1.0) * max).round()
}

pub fn encode_png8(img: &PlanarImage) -> Result<Vec<u8>> {
    let bytes: Vec<u8> = img
        .data()
        .iter()
        .map(|&v| quantize(v, 255.0) as u8)
        .collect();
    let (w, h) = (img.width() as u32, img.height() as u32);
    let dynamic = match img.channels() {
        3 => DynamicImage::ImageRgb8(
            ImageBuffer::<Rgb<u8>, _>::from_raw(w, h, bytes).expect("buffer sized from image"),
        ),
        _ => DynamicImage::ImageLuma8(
            ImageBuffer::<Luma<u8>, _>::from_raw(w, h, bytes).expect("buffer sized from image"),
        ),
    };
    write_png(&dynamic)
}

pub fn encode_png16(img: &PlanarImage) -> Result<Vec<u8>> {
    let words: Vec<u16> = img
        .data()
        .iter()
        .map(|&v| quantize(v, 65535.0) as u16)
        .collect();
    encode_png16_raw(img.height(), img.width(), img.channels(), words)
}

/// Writes raw 16-bit samples, e.g. depth in millimeters.
pub fn encode_png16_raw(
    height: usize,
    width: usize,
    channels: usize,
    words: Vec<u16>,
) -> Result<Vec<u8>> {
    let (w, h) = (width as u32, height as u32);
    let dynamic = match channels {
        3 => DynamicImage::ImageRgb16(
            ImageBuffer::<Rgb<u16>, _>::from_raw(w, h, words)
                .ok_or_else(|| Error::Shape("png16 buffer size".into()))?,
        ),
        _ => DynamicImage::ImageLuma16(
            ImageBuffer::<Luma<u16>, _>::from_raw(w, h, words)
                .ok_or_else(|| Error::Shape("png16 buffer size".into()))?,
        ),
    };
    write_png(&dynamic)
}

fn write_png(img: &DynamicImage) -> Result<Vec<u8>> {
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

pub(crate) fn decode_png_dynamic(bytes: &[u8]) -> Result<DynamicImage> {
    image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| Error::Decode(format!("png: {e}")))
}

/// Decodes a PNG into `[0, 1]`. Gray stays one channel; alpha is dropped.
pub fn decode_png(bytes: &[u8]) -> Result<PlanarImage> {
    let img = decode_png_dynamic(bytes)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let gray = matches!(
        img,
        DynamicImage::ImageLuma8(_)
            | DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA8(_)
            | DynamicImage::ImageLumaA16(_)
    );
    let sixteen = matches!(
        img,
        DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA16(_)
            | DynamicImage::ImageRgb16(_)
            | DynamicImage::ImageRgba16(_)
    );
    let data: Vec<f64> = match (gray, sixteen) {
        (true, false) => img
            .to_luma8()
            .into_raw()
            .into_iter()
            .map(|v| f64::from(v) / 255.0)
            .collect(),
        (true, true) => img
            .to_luma16()
            .into_raw()
            .into_iter()
            .map(|v| f64::from(v) / 65535.0)
            .collect(),
        (false, false) => img
            .to_rgb8()
            .into_raw()
            .into_iter()
            .map(|v| f64::from(v) / 255.0)
            .collect(),
        (false, true) => img
            .to_rgb16()
            .into_raw()
            .into_iter()
            .map(|v| f64::from(v) / 65535.0)
            .collect(),
    };
    PlanarImage::new(h, w, if gray { 1 } else { 3 }, data)
}

/// Decodes any supported map by file extension.
pub fn decode_by_extension(bytes: &[u8], path: &Path) -> Result<PlanarImage> {
    match extension(path).as_deref() {
        Some("png") => decode_png(bytes),
        Some("fmap") => fmap::decode(bytes),
        Some("pfm") => pfm::decode(bytes),
        _ => Err(Error::Decode(format!(
            "{}: unsupported extension (png, fmap, pfm)",
            path.display()
        ))),
    }
}

pub fn read_image(path: &Path) -> Result<PlanarImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_by_extension(&bytes, path).map_err(|e| match e {
        Error::Decode(msg) => Error::Decode(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Writes a file, creating missing parent directories.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub(crate) fn extension(path: &Path) -> Option<String> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
}
