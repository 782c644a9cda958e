//! Lossless float-map container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! 0   4  magic "AQFM"
//! 4   4  version (u32, = 1)
//! 8   4  height (u32)
//! 12  4  width (u32)
//! 16  4  channels (u32, 1 or 3)
//! 20  …  height·width·channels f64 values, row-major, interleaved
//! ```

use crate::error::{Error, Result};
use crate::optics::PlanarImage;

pub const MAGIC: &[u8; 4] = b"AQFM";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 20;

pub fn encode(img: &PlanarImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + img.len() * 8);
    out.extend_from_slice(MAGIC);
    for v in [
        VERSION,
        img.height() as u32,
        img.width() as u32,
        img.channels() as u32,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in img.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4-byte slice"))
}

pub fn decode(bytes: &[u8]) -> Result<PlanarImage> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Decode(format!(
            "float map truncated: {} bytes",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Decode("float map: bad magic".into()));
    }
    let version = read_u32(bytes, 4);
    if version != VERSION {
        return Err(Error::Decode(format!(
            "float map: unsupported version {version}"
        )));
    }
    let height = read_u32(bytes, 8) as usize;
    let width = read_u32(bytes, 12) as usize;
    let channels = read_u32(bytes, 16) as usize;
    let count = height
        .checked_mul(width)
        .and_then(|n| n.checked_mul(channels))
        .filter(|n| n.checked_mul(8).is_some())
        .ok_or_else(|| Error::Decode("float map: dimensions overflow".into()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != count * 8 {
        return Err(Error::Decode(format!(
            "float map: {height}x{width}x{channels} needs {} payload bytes, found {}",
            count * 8,
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    PlanarImage::new(height, width, channels, data).map_err(|e| Error::Decode(e.to_string()))
}
