#![no_main]

use curation_core::scenario::parse_ring_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(range) = parse_ring_range(text) {
        assert!(range.start() <= range.end());
    }
});
