//! End-to-end runs of the command-line binary.

use std::process::Command;

fn hahn(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hahnfactor")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn certify_prime_exits_zero() {
    let (code, out) = hahn(&["certify", "prime", "ladder(limit=0; step=harm(1); coef=const(1))"]);
    assert_eq!(code, 0);
    assert!(out.contains("Certified (ThmF)"), "{out}");
}

#[test]
fn degree_suite_passes() {
    let (code, out) = hahn(&["props", "--suite", "degree", "--cases", "200", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "degree: 200/200 passed");
}

#[test]
fn positive_exponent_is_rejected() {
    assert_eq!(hahn(&["ot", "t^(1)"]).0, 64);
}

#[test]
fn refutation_exits_one() {
    assert_eq!(hahn(&["certify", "irreducible", "1 + t^(-1)"]).0, 1);
}

#[test]
fn json_reports_carry_prefix_length() {
    let out = Command::new(env!("CARGO_BIN_EXE_hahnfactor"))
        .args(["--json", "deg", "ladder(limit=0; step=harm(1); coef=const(1))"])
        .env("HAHN_PREFIX_LEN", "17")
        .output()
        .unwrap();
    let j: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(j["prefixLen"], 17);
    assert_eq!(j["schema"], "hahnfactor/1");
}
