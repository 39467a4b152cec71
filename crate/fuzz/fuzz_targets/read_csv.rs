#![no_main]

use divcheck::report::{read_csv, write_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_csv(data) {
        let mut out = Vec::new();
        write_csv(&records, &mut out).expect("write to memory");
        assert_eq!(read_csv(out.as_slice()).expect("re-read"), records);
    }
});
