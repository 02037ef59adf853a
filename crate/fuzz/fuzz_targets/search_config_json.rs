#![no_main]

use arccover::search::SearchConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = SearchConfig::from_json_str(text) {
        assert!(cfg.validate().is_ok());
    }
});
