#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ac) = tc_arith::parse_ac::<f64>(text) {
        let _ = tc_arith::parse_ac::<f64>(&ac.to_text()).expect("printed circuits parse");
    }
    let _ = tc_arith::parse_ac::<num_rational::BigRational>(text);
});
