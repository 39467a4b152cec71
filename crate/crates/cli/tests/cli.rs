use std::process::{Command, Output};

fn divcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divcheck"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn list_names_every_claim() {
    let o = divcheck(&["list"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = String::from_utf8(o.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(names.len(), 19);
    assert!(names.iter().any(|n| n == "mertens-ratio"));
    assert!(!names.iter().any(|n| n.starts_with("synthetic")));
}

#[test]
fn exit_codes_follow_worst_status() {
    for (claim, want) in [
        ("synthetic-pass", 0),
        ("synthetic-fail", 1),
        ("synthetic-inconclusive", 2),
    ] {
        let o = divcheck(&["verify", claim, "--x-min", "1", "--x-max", "4"]);
        assert_eq!(code(&o), want, "{claim}");
        let csv = String::from_utf8(o.stdout).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("claim_id,x,lhs_mid,lhs_rad,rhs_mid,rhs_rad,margin,status\n"));
    }
}

#[test]
fn errors_exit_three() {
    assert_eq!(code(&divcheck(&["verify", "lemma99", "--x-max", "4"])), 3);
    assert_eq!(
        code(&divcheck(&["verify", "cor8", "--x-min", "100", "--x-max", "400"])),
        3
    );
    assert_eq!(
        code(&divcheck(&[
            "verify",
            "theorem1-large",
            "--x-min",
            "10",
            "--x-max",
            "400"
        ])),
        3
    );
    assert_eq!(
        code(&divcheck(&["verify", "r1-bound", "--x-min", "5", "--x-max", "2"])),
        3
    );
    assert_eq!(code(&divcheck(&["verify", "r1-bound", "--x-max", "1/0"])), 3);
    assert_eq!(
        code(&divcheck(&["verify", "r1-bound", "--x-max", "9", "--mode", "spiral"])),
        3
    );
    assert_eq!(
        code(&divcheck(&[
            "verify",
            "r1-bound",
            "--x-max",
            "9",
            "--precision-bits",
            "8"
        ])),
        3
    );
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{run}.{format}"));
            let o = divcheck(&[
                "verify",
                "lemma5",
                "--x-min",
                "1",
                "--x-max",
                "5000",
                "--mode",
                "random-rational",
                "--count",
                "40",
                "--seed",
                "11",
                "--format",
                format,
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0);
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{format}");
    }
    let other = divcheck(&[
        "verify",
        "lemma5",
        "--x-min",
        "1",
        "--x-max",
        "5000",
        "--mode",
        "random-rational",
        "--count",
        "40",
        "--seed",
        "12",
    ]);
    let first = std::fs::read(dir.path().join("0.csv")).unwrap();
    assert_ne!(other.stdout, first);
}

#[test]
fn json_report_reads_back() {
    let o = divcheck(&[
        "verify",
        "delta-log-2",
        "--x-min",
        "2",
        "--x-max",
        "1000",
        "--mode",
        "geometric",
        "--count",
        "12",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let report = divcheck::report::read_json(o.stdout.as_slice()).unwrap();
    assert_eq!(report.claim_id, "delta-log-2");
    assert_eq!(report.records.len(), 12);
}

#[test]
fn theorem_general_full_run() {
    let o = divcheck(&[
        "verify",
        "theorem1-general",
        "--x-min",
        "1",
        "--x-max",
        "10000",
        "--mode",
        "all-integers",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 10_001);
}

#[test]
fn mertens_sign_names_the_change() {
    let o = divcheck(&["verify", "mertens-sign", "--x-max", "20000"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let last = csv.lines().last().unwrap();
    assert!(
        last.starts_with("mertens-sign-change,1.8350000000000000000e4,"),
        "{last}"
    );
    assert!(String::from_utf8(o.stderr).unwrap().contains("x = 18350"));
}
