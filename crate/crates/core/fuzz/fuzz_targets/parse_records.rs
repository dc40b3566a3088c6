#![no_main]

use hivelab::textfmt::{parse_records, to_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(recs) = parse_records(text) {
        // anything accepted must survive a write/read cycle unchanged
        let again = parse_records(&to_text(&recs)).expect("re-parse of written records");
        assert_eq!(again, recs);
    }
});
