#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing must never panic; a successfully parsed file must survive the
    // print/reparse round trip and build without panicking
    if let Ok(file) = plectic::parse::parse_structure(text) {
        let printed = file.to_text();
        let reparsed = plectic::parse::parse_structure(&printed).expect("round trip");
        assert_eq!(reparsed, file);
        let _ = file.build();
    }
});
