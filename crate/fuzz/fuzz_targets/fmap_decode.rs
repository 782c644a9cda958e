#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = aquasim::io::fmap::decode(data) {
        // Anything that decodes must survive a round trip.
        assert_eq!(
            aquasim::io::fmap::decode(&aquasim::io::fmap::encode(&img)).unwrap(),
            img
        );
    }
});
