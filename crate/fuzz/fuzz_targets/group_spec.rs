#![no_main]
use libfuzzer_sys::fuzz_target;

use symsub::phi::{normalize_spec, phi_formula, FormulaSource};
use symsub::GroupSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<GroupSpec>(data) else { return };
    let norm = normalize_spec(spec);
    assert_eq!(normalize_spec(norm), norm);
    for source in [FormulaSource::Propositions, FormulaSource::Conclusion] {
        match phi_formula(spec, source) {
            Ok(v) => assert_eq!(phi_formula(norm, source).ok(), Some(v)),
            Err(_) => assert!(spec.validate().is_err()),
        }
    }
});
