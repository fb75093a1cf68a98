#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(src) = std::str::from_utf8(data) {
        // The parser must reject garbage with an error, never a panic.
        if let Ok(expr) = germforge::germ::parse_germ(src) {
            // Accepted expressions must print and re-parse cleanly.
            let text = expr.to_string();
            let again = germforge::germ::parse_germ(&text)
                .expect("printed germ no longer parses");
            assert_eq!(text, again.to_string());
        }
    }
});
