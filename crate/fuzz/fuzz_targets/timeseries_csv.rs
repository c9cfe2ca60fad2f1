#![no_main]

use curation_core::report::{parse_timeseries_csv, timeseries_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(samples) = parse_timeseries_csv(text) {
        if !samples.is_empty() {
            let again = parse_timeseries_csv(&timeseries_csv(&samples).unwrap()).unwrap();
            assert_eq!(again, samples);
        }
    }
});
