#![no_main]

use arccover::CoverParams;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = CoverParams::from_json_str(text) {
        assert!(p.area() > 0.0);
        let back = CoverParams::from_json_str(&p.to_json_string()).unwrap();
        assert_eq!(back, p);
    }
});
