#![no_main]

use hivelab::textfmt::parse_spectrum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_spectrum(text) {
        assert!(!s.is_empty());
        assert!(s.as_slice().windows(2).all(|w| w[0] >= w[1]));
    }
});
