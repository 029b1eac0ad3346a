#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let n_vars = 1 + (data.len() % 8);
    if let Ok(c) = plectic::parse::parse_cotensor(text, n_vars) {
        let printed = c.to_string();
        let reparsed = plectic::parse::parse_cotensor(&printed, n_vars).expect("round trip");
        assert_eq!(reparsed, c);
    }
    let _ = plectic::parse::parse_tensor(text, n_vars);
});
