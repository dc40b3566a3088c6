#![no_main]

use hivelab::harness::{parse_csv, parse_json, render, TableFormat};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for (rows, format) in [
        (parse_csv(text), TableFormat::Csv),
        (parse_json(text), TableFormat::Json),
    ] {
        if let Ok(rows) = rows {
            let back = match format {
                TableFormat::Csv => parse_csv(&render(&rows, format)),
                TableFormat::Json => parse_json(&render(&rows, format)),
            }
            .expect("re-parse of rendered table");
            assert_eq!(back.len(), rows.len());
        }
    }
});
