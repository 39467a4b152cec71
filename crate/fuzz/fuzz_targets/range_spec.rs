#![no_main]

//! Input: `claim x_min x_max mode`, whitespace separated.

use divcheck::claims::ClaimId;
use divcheck::rational::parse_rational;
use divcheck::report::{RangeSpec, SampleMode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let mut it = s.split_whitespace();
    let (Some(claim), Some(lo), Some(hi), Some(mode)) = (it.next(), it.next(), it.next(), it.next()) else {
        return;
    };
    let _ = claim.parse::<ClaimId>();
    let (Ok(lo), Ok(hi)) = (parse_rational(lo), parse_rational(hi)) else {
        return;
    };
    let mode = match mode {
        "geometric" => SampleMode::Geometric { count: 8 },
        "random-rational" => SampleMode::RandomRational {
            count: 8,
            max_denominator: 100,
            seed: 1,
        },
        _ => return,
    };
    if let Ok(range) = RangeSpec::new(lo, hi, mode) {
        if let Ok(points) = range.points() {
            assert!(points.windows(2).all(|w| w[0] < w[1]));
            assert!(points.iter().all(|p| *p >= range.x_min && *p <= range.x_max));
        }
    }
});
