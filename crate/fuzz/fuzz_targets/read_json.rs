#![no_main]

use divcheck::report::{read_json, write_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = read_json(data) {
        let mut out = Vec::new();
        write_json(&report, &mut out).expect("write to memory");
        let again = read_json(out.as_slice()).expect("re-read");
        assert_eq!(again.records, report.records);
        assert_eq!(again.notes, report.notes);
    }
});
