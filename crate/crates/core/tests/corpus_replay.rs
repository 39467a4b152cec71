//! Runs the fuzz targets' properties over the checked-in corpus seeds.

use std::fs;
use std::path::PathBuf;

use divcheck::rational::{parse_rational, to_fraction_string};
use divcheck::report::{read_csv, read_json, write_csv, write_json};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn rational_seeds_parse_and_round_trip() {
    for s in seeds("parse_rational") {
        let x = parse_rational(std::str::from_utf8(&s).unwrap()).unwrap();
        assert_eq!(parse_rational(&to_fraction_string(&x)).unwrap(), x);
    }
}

#[test]
fn csv_seeds_round_trip() {
    for s in seeds("read_csv") {
        let records = read_csv(s.as_slice()).unwrap();
        let mut out = Vec::new();
        write_csv(&records, &mut out).unwrap();
        assert_eq!(out, s);
    }
}

#[test]
fn json_seeds_round_trip() {
    for s in seeds("read_json") {
        let report = read_json(s.as_slice()).unwrap();
        let mut out = Vec::new();
        write_json(&report, &mut out).unwrap();
        assert_eq!(out, s);
    }
}
