#![no_main]

use arccover::oracle::FailureDump;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = FailureDump::from_json_str(text) {
        let _ = d.to_json_string();
    }
});
