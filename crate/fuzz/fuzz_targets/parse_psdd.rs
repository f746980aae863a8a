#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let vtree = tc_core::parse_vtree("vtree 5\nL 1 1\nL 3 2\nI 2 1 3\nL 4 3\nI 0 2 4\n").unwrap();
    let _ = tc_arith::parse_psdd::<f64>(vtree, text);
});
