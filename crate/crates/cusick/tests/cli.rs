//! Black-box checks of the command-line surface: output formats, integer
//! literal forms, and exit codes (0 ok, 1 usage/runtime error).

use std::process::{Command, Output};

fn cusick(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusick"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cusick(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) {
    let out = cusick(args);
    assert_eq!(
        out.status.code(),
        Some(1),
        "expected exit 1 for {args:?}, stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn ct_prints_dyadic_and_decimal() {
    assert_eq!(stdout(&["ct", "3"]), "11/2^4 0.687500000000\n");
    assert_eq!(stdout(&["ct", "0"]), "1/2^0 1.000000000000\n");
    // binary literals are accepted
    assert_eq!(stdout(&["ct", "0b101"]), "5/2^3 0.625000000000\n");
}

#[test]
fn blocks_and_patterns() {
    assert_eq!(stdout(&["blocks", "149"]), "4\n");
    assert_eq!(stdout(&["blocks", "0"]), "0\n");
    assert_eq!(stdout(&["patterns", "13"]), "0\n");
    assert_eq!(stdout(&["patterns", "16"]), "\n");
}

#[test]
fn phi_lists_support() {
    let out = stdout(&["phi", "3"]);
    assert_eq!(out, "-1 1/2^1 0.500000000000\n1 1/2^1 0.500000000000\n");
}

#[test]
fn pair_and_delta() {
    let out = stdout(&["pair", "3"]);
    assert!(out.contains("c_t 11/2^4 0.687500000000"));
    assert!(out.contains("pair_sum 11/2^3 1.375000000000"));

    let out = stdout(&["delta", "3", "--k-window", "3"]);
    assert!(out.contains("0 5/2^4 0.312500000000"));
    assert!(out.contains("2 1/2^2 0.250000000000"));
    assert!(out.contains("tail_start 0"));
}

#[test]
fn omega_and_psi() {
    let out = stdout(&["omega", "3", "--theta", "0/5"]);
    assert!(out.starts_with("(1.0000000000000"), "got {out}");
    let out = stdout(&["psi", "3", "-m", "2"]);
    assert_eq!(out, "0 0 0.000000000000\n1 1/2^0 1.000000000000\n");
}

#[test]
fn bound_chain() {
    let out = stdout(&["bound", "--epsilon", "0.6"]);
    assert!(out.contains("N = 1"), "got {out}");
    assert!(out.contains("m = 11"));
    assert!(out.contains("C = "));
    assert!(out.contains("theorem_lower_bound"));
}

#[test]
fn verify_theorem_reports_hypothesis() {
    let out = stdout(&["verify-theorem", "--epsilon", "0.99", "--t", "5"]);
    assert!(out.contains("hypothesis_met = false"));
    assert!(out.contains("pair_sum"));
}

#[test]
fn oracle_histogram() {
    let out = stdout(&["oracle", "1", "--limit", "4"]);
    assert!(out.contains("c_t_estimate 0.750000000000"));
    assert!(out.contains("-1 1 0.250000000000"));
}

#[test]
fn usage_and_runtime_errors_exit_one() {
    fails(&["ct", "abc"]);
    fails(&["ct"]);
    fails(&["nonsense"]);
    fails(&["bound", "--epsilon", "1.5"]);
    fails(&["bound", "--epsilon", "-0.1"]);
    fails(&["omega", "0", "--theta", "1/3"]);
    fails(&["omega", "3", "--theta", "x/3"]);
    fails(&["psi", "3", "-m", "0"]);
    fails(&["verify-theorem", "--epsilon", "0.5"]);
    fails(&["oracle", "3", "--limit", "0"]);
}

#[test]
fn sweep_worker_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let capped = dir.path().join("capped.jsonl");
    let free = dir.path().join("free.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_cusick"))
        .env(cusick::harness::MAX_JOBS_ENV, "1")
        .args([
            "sweep", "--from", "1", "--to", "3000", "--jobs", "8",
            "--out", capped.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_cusick"))
        .args([
            "sweep", "--from", "1", "--to", "3000", "--jobs", "4",
            "--out", free.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(capped).unwrap(),
        std::fs::read(free).unwrap()
    );
}

#[test]
fn sweep_argument_validation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.jsonl").to_string_lossy().into_owned();
    fails(&["sweep", "--from", "0", "--to", "10", "--out", &out]);
    fails(&[
        "sweep", "--from", "1", "--to", "10", "--checks", "bogus", "--out", &out,
    ]);
    let summary = stdout(&[
        "sweep", "--from", "1", "--to", "10", "--checks", "floor", "--out", &out,
    ]);
    assert!(summary.contains("records 9"));
    assert!(summary.contains("floor violations"));
    assert!(!summary.contains("cusick violations"));
}
