//! End-to-end checks of the command-line binary: JSON/CSV output, exit
//! codes, and worker-count independence.

mod common;

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use avdist::linalg::ComplexMatrix;
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_avdist"))
}

fn mat_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(m).unwrap()
}

fn fixtures() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("avdist-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let zero = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let one = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    let eye = ComplexMatrix::identity(2);
    let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    fs::write(
        dir.join("s0.json"),
        json!({ "kind": "state", "mat": mat_json(&zero) }).to_string(),
    )
    .unwrap();
    fs::write(
        dir.join("s1.json"),
        json!({ "kind": "state", "mat": mat_json(&one) }).to_string(),
    )
    .unwrap();
    fs::write(
        dir.join("povm.json"),
        json!({ "kind": "povm", "effects": [mat_json(&zero), mat_json(&one)] }).to_string(),
    )
    .unwrap();
    fs::write(
        dir.join("povm_swapped.json"),
        json!({ "kind": "povm", "effects": [mat_json(&one), mat_json(&zero)] }).to_string(),
    )
    .unwrap();
    fs::write(
        dir.join("cid.json"),
        json!({ "kind": "channel", "kraus": [mat_json(&eye)] }).to_string(),
    )
    .unwrap();
    fs::write(
        dir.join("cz.json"),
        json!({ "kind": "channel", "kraus": [mat_json(&z)] }).to_string(),
    )
    .unwrap();
    fs::write(dir.join("haar2.json"), json!({ "kind": "haar", "dim": 2 }).to_string()).unwrap();
    dir
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn distance_reports_value_kind_and_dims() {
    let dir = fixtures();
    let out = bin()
        .args(["distance", "--kind", "state", "--a"])
        .arg(dir.join("s0.json"))
        .arg("--b")
        .arg(dir.join("s1.json"))
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["kind"], "state");
    assert_eq!(v["dims"][0], 2);
}

#[test]
fn worst_channel_solves_diamond() {
    let dir = fixtures();
    let out = bin()
        .args(["worst", "--kind", "channel", "--a"])
        .arg(dir.join("cid.json"))
        .arg("--b")
        .arg(dir.join("cz.json"))
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["converged"], true);
}

#[test]
fn estimate_is_bit_identical_across_worker_counts() {
    let dir = fixtures();
    let run = |workers: &str| {
        let out = bin()
            .args(["--seed", "123", "--workers", workers, "estimate", "--kind", "povm"])
            .arg("--a")
            .arg(dir.join("povm.json"))
            .arg("--b")
            .arg(dir.join("povm_swapped.json"))
            .arg("--ensemble")
            .arg(dir.join("haar2.json"))
            .args(["--samples", "500"])
            .output()
            .unwrap();
        stdout_json(&out)
    };
    let one = run("1");
    let eight = run("8");
    assert_eq!(one["mean"], eight["mean"]);
    assert_eq!(one["std_err"], eight["std_err"]);
}

#[test]
fn reproduce_emits_versioned_csv() {
    let out = bin()
        .args(["reproduce", "--case", "povm_swap", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# avdist-csv v1");
    assert_eq!(
        lines.next().unwrap(),
        "case,quantity,expected,actual,tolerance,passed"
    );
    assert!(text.contains("povm_swap"));
}

#[test]
fn out_flag_writes_file() {
    let dir = fixtures();
    let path = dir.join("constants.json");
    let out = bin()
        .args(["constants", "--kind", "state", "--dim", "4", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["c"].as_f64().unwrap() - 0.31).abs() < 1e-15);
    assert!((v["big_c"].as_f64().unwrap() - (4.0f64 / 5.0).sqrt()).abs() < 1e-12);
}

#[test]
fn input_errors_exit_with_code_two() {
    let out = bin()
        .args(["distance", "--kind", "state", "--a", "/nonexistent.json", "--b", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["constants", "--kind", "state", "--dim", "4", "--delta-prime", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["closed-form", "--name", "nope", "--params", "{}"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn propcheck_passes_on_small_sweep() {
    let out = bin()
        .args(["--seed", "17", "propcheck", "--suite", "metric", "--trials", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"][0]["violations"], 0);
}

#[test]
fn frame_potential_reports_haar_reference() {
    let dir = fixtures();
    let out = bin()
        .args(["--seed", "2", "frame-potential", "--k", "2", "--samples", "500", "--ensemble"])
        .arg(dir.join("haar2.json"))
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["haar_value"], 2.0);
    let mean = v["estimate"]["mean"].as_f64().unwrap();
    let se = v["estimate"]["std_err"].as_f64().unwrap();
    assert!((mean - 2.0).abs() < 5.0 * se);
}
