#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        // Same grammar as parse_germ plus the alpha1..alpha9 parameters.
        if let Ok(expr) = germforge::germ::parse_unfolding(src) {
            let text = expr.to_string();
            let again = germforge::germ::parse_unfolding(&text)
                .expect("printed unfolding no longer parses");
            assert_eq!(text, again.to_string());
        }
    }
});
