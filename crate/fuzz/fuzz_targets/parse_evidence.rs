#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let names: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
    let _ = tc_core::Assignment::parse_evidence(text, Some(&names), 3);
    let _ = tc_core::lit::parse_var_list(text, None, 6);
});
