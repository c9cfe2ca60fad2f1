#![no_main]

use curation_core::config::parse_real;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_real(text) {
        assert!(x.is_finite());
    }
});
