#![allow(dead_code)]

use aquasim::PlanarImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(
    rng: &mut ChaCha8Rng,
    h: usize,
    w: usize,
    c: usize,
    lo: f64,
    hi: f64,
) -> PlanarImage {
    let data = (0..h * w * c).map(|_| rng.random_range(lo..hi)).collect();
    PlanarImage::new(h, w, c, data).unwrap()
}
