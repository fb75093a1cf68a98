#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(value) = serde_json::from_str::<serde_json::Value>(text) else {
        return;
    };
    // Every structured decoder must reject malformed documents with an
    // error instead of panicking.
    if let Ok(p) = germforge::json::polynomial_from_json(&value) {
        // Accepted polynomials round-trip through the encoder.
        let back = germforge::json::polynomial_from_json(&germforge::json::polynomial_to_json(&p))
            .expect("encoded polynomial no longer decodes");
        assert_eq!(p, back);
    }
    let _ = germforge::json::staircase_from_json(&value);
    let _ = germforge::json::unfolding_from_json(&value);
});
