#![no_main]

use arccover::certify::CertificationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = CertificationReport::from_json_str(text) {
        let _ = r.summary();
        let _ = r.compare_to_published();
        let _ = r.binding_case();
    }
});
