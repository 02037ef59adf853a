#![no_main]

use arccover::catalog::{catalog_from_json, catalog_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cases) = catalog_from_json(text) {
        let again = catalog_from_json(&catalog_to_json(&cases)).unwrap();
        assert_eq!(again.len(), cases.len());
    }
});
