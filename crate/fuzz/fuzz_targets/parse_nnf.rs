#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = tc_core::parse_nnf(text) {
        let again = tc_core::parse_nnf(&c.to_text()).expect("printed circuits parse");
        assert_eq!(again.to_text(), c.to_text());
    }
});
