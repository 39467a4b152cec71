#![no_main]

use divcheck::rational::{parse_rational, to_fraction_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_rational(s) {
        let back = parse_rational(&to_fraction_string(&x)).expect("rendered fraction parses");
        assert_eq!(back, x);
    }
});
