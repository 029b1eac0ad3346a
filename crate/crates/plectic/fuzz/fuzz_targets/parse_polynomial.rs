#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let n_vars = 1 + (data.len() % 8);
    if let Ok(p) = plectic::parse::parse_polynomial(text, n_vars) {
        let printed = p.to_string();
        let reparsed = plectic::parse::parse_polynomial(&printed, n_vars).expect("round trip");
        assert_eq!(reparsed, p);
    }
});
