#![no_main]

use arccover::oracle::{perimeter, ConvexUnitCurve};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = ConvexUnitCurve::from_json_str(text) {
        assert!((perimeter(c.vertices()) - 1.0).abs() <= 1e-9);
    }
});
