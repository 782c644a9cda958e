#![no_main]

use aquasim::synth::SceneSidecar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(sidecar) = SceneSidecar::from_json(data) {
        let _ = sidecar.to_scene();
    }
});
