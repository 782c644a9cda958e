#![no_main]

use std::path::Path;

use aquasim::synth::{decode_depth, DepthEncoding};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = decode_depth(data, Path::new("depth.png"), DepthEncoding::Millimeters16);
    let _ = decode_depth(data, Path::new("depth.fmap"), DepthEncoding::MetersFloat);
    let _ = decode_depth(data, Path::new("depth.pfm"), DepthEncoding::MetersFloat);
});
