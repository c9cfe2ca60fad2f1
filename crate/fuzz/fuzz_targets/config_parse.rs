#![no_main]

use curation_core::config::ScenarioConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = ScenarioConfig::from_toml_str(text) {
        let echoed = ScenarioConfig::from_toml_str(&config.to_toml_string()).expect("echo parses");
        assert_eq!(echoed, config);
    }
});
