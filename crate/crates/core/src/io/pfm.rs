//! Portable Float Map (`.pfm`) reader and writer.
//!
//! `PF` is three-channel, `Pf` is one-channel. A negative scale marks
//! little-endian samples. Rows are stored bottom-to-top.

use crate::error::{Error, Result};
use crate::optics::PlanarImage;

pub fn encode(img: &PlanarImage) -> Vec<u8> {
    let tag = if img.channels() == 3 { "PF" } else { "Pf" };
    let mut out = format!("{tag}\n{} {}\n-1.0\n", img.width(), img.height()).into_bytes();
    for y in (0..img.height()).rev() {
        for x in 0..img.width() {
            for c in 0..img.channels() {
                out.extend_from_slice(&(img.get(y, x, c) as f32).to_le_bytes());
            }
        }
    }
    out
}

/// Reads one whitespace-delimited header token starting at `*pos`.
fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a str> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Decode("pfm: truncated header".into()));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .map_err(|_| Error::Decode("pfm: header is not ASCII".into()))
}

pub fn decode(bytes: &[u8]) -> Result<PlanarImage> {
    let mut pos = 0;
    let channels = match token(bytes, &mut pos)? {
        "PF" => 3,
        "Pf" => 1,
        other => return Err(Error::Decode(format!("pfm: bad magic {other:?}"))),
    };
    let parse_dim = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Decode(format!("pfm: bad dimension {s:?}")))
    };
    let width = parse_dim(token(bytes, &mut pos)?)?;
    let height = parse_dim(token(bytes, &mut pos)?)?;
    let scale: f64 = token(bytes, &mut pos)?
        .parse()
        .map_err(|_| Error::Decode("pfm: bad scale".into()))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Decode("pfm: scale must be non-zero".into()));
    }
    // Exactly one whitespace byte separates the header from the samples.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::Decode("pfm: missing header terminator".into()));
    }
    pos += 1;

    let count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .filter(|n| n.checked_mul(4).is_some())
        .ok_or_else(|| Error::Decode("pfm: dimensions overflow".into()))?;
    let payload = &bytes[pos..];
    if payload.len() != count * 4 {
        return Err(Error::Decode(format!(
            "pfm: {width}x{height}x{channels} needs {} bytes, found {}",
            count * 4,
            payload.len()
        )));
    }
    let little = scale < 0.0;
    let samples: Vec<f64> = payload
        .chunks_exact(4)
        .map(|c| {
            let raw: [u8; 4] = c.try_into().expect("4-byte chunk");
            f64::from(if little {
                f32::from_le_bytes(raw)
            } else {
                f32::from_be_bytes(raw)
            })
        })
        .collect();
    let row = width * channels;
    let mut data = Vec::with_capacity(count);
    for y in (0..height).rev() {
        data.extend_from_slice(&samples[y * row..(y + 1) * row]);
    }
    PlanarImage::new(height, width, channels, data).map_err(|e| Error::Decode(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_f32() {
        let img =
            PlanarImage::from_fn(3, 4, 3, |y, x, c| (y * 12 + x * 3 + c) as f64 * 0.25).unwrap();
        assert_eq!(decode(&encode(&img)).unwrap(), img);
        let gray = img.channel(1);
        assert_eq!(decode(&encode(&gray)).unwrap(), gray);
    }

    #[test]
    fn big_endian_samples() {
        let mut bytes = b"Pf\n2 1\n1.0\n".to_vec();
        bytes.extend_from_slice(&1.5f32.to_be_bytes());
        bytes.extend_from_slice(&2.5f32.to_be_bytes());
        let img = decode(&bytes).unwrap();
        assert_eq!(img.data(), &[1.5, 2.5]);
    }

    #[test]
    fn rows_are_bottom_up() {
        let mut bytes = b"Pf\n1 2\n-1.0\n".to_vec();
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        bytes.extend_from_slice(&2.0f32.to_le_bytes());
        let img = decode(&bytes).unwrap();
        assert_eq!(img.get(0, 0, 0), 2.0);
        assert_eq!(img.get(1, 0, 0), 1.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(decode(b"").is_err());
        assert!(decode(b"P6\n1 1\n-1.0\n\0\0\0\0").is_err());
        assert!(decode(b"Pf\n1 1\n0\n\0\0\0\0").is_err());
        assert!(decode(b"Pf\n1 1\n-1.0\n\0\0\0").is_err());
        assert!(decode(b"Pf\n99999999999 99999999999\n-1.0\n").is_err());
    }
}
