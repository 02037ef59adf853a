#![no_main]

use arccover::constraint::ConstraintSystem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sys) = ConstraintSystem::from_json_str(text) {
        let again = ConstraintSystem::from_json_str(&sys.to_json_string()).unwrap();
        assert_eq!(again.len(), sys.len());
        let _ = sys.max_violation(&[0.0; 16]);
    }
});
