#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = tc_core::parse_weights(text, 8);
    let _ = tc_core::weights::parse_rational(text);
});
