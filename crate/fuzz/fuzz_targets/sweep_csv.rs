#![no_main]

use curation_core::report::{parse_sweep_csv, sweep_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_sweep_csv(text) {
        assert_eq!(parse_sweep_csv(&sweep_csv(&rows)).unwrap(), rows);
    }
});
