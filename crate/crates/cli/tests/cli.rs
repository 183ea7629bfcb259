//! End-to-end checks of the binary: exit codes, report shapes and
//! determinism.

use std::process::Command;

fn csmx() -> Command {
    Command::new(env!("CARGO_BIN_EXE_csmx"))
}

#[test]
fn usage_error_without_a_selector() {
    let out = csmx().arg("verify").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_check_family_is_a_usage_error() {
    let out = csmx().args(["prop", "verify", "--check", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parity_family_passes_with_json_lines() {
    let out = csmx().args(["verify", "--identity", "parity"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], serde_json::Value::Bool(true), "{line}");
    }
}

#[test]
fn reports_are_byte_identical_for_a_fixed_seed() {
    let run = || {
        csmx()
            .args(["verify", "--identity", "wick-duality", "--randomized", "50", "--seed", "9"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn straddling_profile_is_refused_not_evaluated() {
    let out = csmx()
        .args([
            "prop", "eval", "--dist", "dret", "--route", "cut", "--mass", "0.5", "--center",
            "0.0,0.0,0.0,0.0", "--widths", "0.5,1.0,1.0,1.0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("straddles"), "{err}");
}

#[test]
fn evaluation_emits_one_csv_row() {
    let out = csmx()
        .args([
            "prop", "eval", "--dist", "dminus", "--mass", "0.0", "--center", "0,0,0,0",
            "--widths", "1,1,1,1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("distribution,mass"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("dminus,0,"), "{row}");
    // The massless value of the standard Gaussian is i/2.
    let fields: Vec<&str> = row.split(',').collect();
    let im: f64 = fields[6].parse().unwrap();
    assert!((im - 0.5).abs() < 1e-9);
}

#[test]
fn first_order_unitarity_bracket_reports_zero() {
    let out = csmx().args(["smatrix", "unitarity", "--order", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).lines().next().unwrap()).unwrap();
    assert_eq!(v["symbolically_zero"], serde_json::Value::Bool(true));
}
