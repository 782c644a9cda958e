//! Seeded procedural RGB-D scenes for demos and tests.
//!
//! The clean image is a sum of soft coloured blobs over a textured base;
//! depth is a tilted plane with a few raised objects, so near objects and
//! far background degrade differently.

use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::io;
use crate::optics::{DepthMap, PlanarImage};

use super::sampler::record_rng;

const BLOBS: usize = 6;
const NEAR_M: f64 = 1.0;
const FAR_M: f64 = 8.0;

struct Blob {
    center: [f64; 2],
    radius: f64,
    color: [f64; 3],
    lift_m: f64,
}

/// Builds a clean image in `[0, 1]` and a depth map in meters.
pub fn procedural_rgbd(seed: u64, height: usize, width: usize) -> Result<(PlanarImage, DepthMap)> {
    if height == 0 || width == 0 {
        return Err(Error::Shape(format!("empty image {height}x{width}")));
    }
    let mut rng = record_rng(seed, u64::MAX);
    let base: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.25..0.75));
    let freq = [rng.random_range(0.1..0.6), rng.random_range(0.1..0.6)];
    let scale = height.min(width) as f64;
    let blobs: Vec<Blob> = (0..BLOBS)
        .map(|_| Blob {
            center: [
                rng.random_range(0.0..width as f64),
                rng.random_range(0.0..height as f64),
            ],
            radius: rng.random_range(0.08..0.3) * scale,
            color: std::array::from_fn(|_| rng.random_range(0.05..0.95)),
            lift_m: rng.random_range(0.5..4.0),
        })
        .collect();
    let tilt = rng.random_range(0.0..1.0);

    let weight = |b: &Blob, y: usize, x: usize| {
        let dx = x as f64 - b.center[0];
        let dy = y as f64 - b.center[1];
        (-(dx * dx + dy * dy) / (2.0 * b.radius * b.radius)).exp()
    };
    let clean = PlanarImage::from_fn(height, width, 3, |y, x, c| {
        let texture = 0.08 * ((x as f64 * freq[0]).sin() * (y as f64 * freq[1]).cos());
        let mut v = base[c] + texture;
        for b in &blobs {
            let w = weight(b, y, x);
            v = v * (1.0 - w) + b.color[c] * w;
        }
        v.clamp(0.0, 1.0)
    })?;
    let depth = PlanarImage::from_fn(height, width, 1, |y, x, _| {
        let ry = y as f64 / (height - 1).max(1) as f64;
        let rx = x as f64 / (width - 1).max(1) as f64;
        let mut d = NEAR_M + (FAR_M - NEAR_M) * (tilt * rx + (1.0 - tilt) * (1.0 - ry));
        for b in &blobs {
            d -= b.lift_m * weight(b, y, x);
        }
        d.max(0.3)
    })?;
    Ok((clean, DepthMap::new(depth)?))
}

/// Writes `root/rgb/<id>.png` (8-bit) and `root/depth/<id>.png` (16-bit
/// millimeters), the layout accepted by directory input.
pub fn write_rgbd_pair(root: &Path, id: &str, clean: &PlanarImage, depth: &DepthMap) -> Result<()> {
    let mm: Vec<u16> = depth
        .image()
        .data()
        .iter()
        .map(|m| (m * 1000.0).round().clamp(1.0, f64::from(u16::MAX)) as u16)
        .collect();
    io::write_bytes(
        &root.join("rgb").join(format!("{id}.png")),
        &io::encode_png8(clean)?,
    )?;
    io::write_bytes(
        &root.join("depth").join(format!("{id}.png")),
        &io::encode_png16_raw(depth.height(), depth.width(), 1, mm)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let (a, da) = procedural_rgbd(3, 20, 30).unwrap();
        let (b, db) = procedural_rgbd(3, 20, 30).unwrap();
        assert_eq!((&a, &da), (&b, &db));
        assert!(a.min_value() >= 0.0 && a.max_value() <= 1.0);
        assert!(da.image().min_value() >= 0.3 && da.image().max_value() <= FAR_M);
        assert_ne!(procedural_rgbd(4, 20, 30).unwrap().0, a);
    }
}
