//! End-to-end CLI tests: formats, golden outputs, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gallai"))
}

fn tmpdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("tempdir")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

/// Deterministic view of a report: everything except the timing field.
fn strip_timing(mut v: serde_json::Value) -> serde_json::Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing_ms");
    }
    v
}

#[test]
fn gen_tree_golden_e1() {
    let dir = tmpdir();
    let tree = dir.path().join("e1.sexp");
    std::fs::write(&tree, "(sub (q 2 3 3) (child (leaf 2 3 1)) (child (leaf 2 3 2)))").unwrap();
    let out_path = dir.path().join("e1.gal");
    let out = bin()
        .args(["gen", "--tree"])
        .arg(&tree)
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let bytes = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(bytes, "4 3\n1 3 3 3 3 2\n");
}

#[test]
fn check_rainbow_exits_2_with_triple() {
    let dir = tmpdir();
    let gal = dir.path().join("rainbow.gal");
    std::fs::write(&gal, "3 3\n1 2 3\n").unwrap();
    let out = bin().args(["check", "--file"]).arg(&gal).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert_eq!(report["gallai"], serde_json::json!(false));
    assert_eq!(report["rainbow_triangle"], serde_json::json!([0, 1, 2]));
}

#[test]
fn check_gallai_exits_0() {
    let dir = tmpdir();
    let gal = dir.path().join("e1.gal");
    std::fs::write(&gal, "4 3\n1 3 3 3 3 2\n").unwrap();
    let out = bin().args(["check", "--file"]).arg(&gal).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gen_zero_vertices_is_usage_error() {
    let out = bin().args(["gen", "--n", "0", "--r", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tmpdir();
    let (a, b, c) = (
        dir.path().join("a.gal"),
        dir.path().join("b.gal"),
        dir.path().join("c.gal"),
    );
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = bin()
            .args(["gen", "--n", "40", "--r", "4", "--seed", seed, "--out"])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let (fa, fb, fc) = (
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        std::fs::read(&c).unwrap(),
    );
    assert_eq!(fa, fb);
    assert_ne!(fa, fc);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let dir = tmpdir();
    let gal = dir.path().join("g.gal");
    bin()
        .args(["gen", "--n", "25", "--r", "3", "--seed", "5", "--out"])
        .arg(&gal)
        .output()
        .unwrap();
    let run = || {
        let out = bin()
            .args(["extract", "--alg", "triple", "--file"])
            .arg(&gal)
            .output()
            .unwrap();
        assert!(out.status.success());
        strip_timing(stdout_json(&out))
    };
    assert_eq!(run(), run());
}

#[test]
fn oracle_on_e1() {
    let dir = tmpdir();
    let gal = dir.path().join("e1.gal");
    std::fs::write(&gal, "4 3\n1 3 3 3 3 2\n").unwrap();
    let out = bin()
        .args(["oracle", "--colors", "1,3", "--file"])
        .arg(&gal)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["size"], serde_json::json!(3));
}

#[test]
fn extract_cograph_on_e1() {
    let dir = tmpdir();
    let gal= dir.path().join("e1.gal");
    std::fs::write(&gal, "4 3\n1 3 3 3 3 2\n").unwrap();
    let out = bin()
        .args(["extract", "--alg", "cograph", "--file"])
        .arg(&gal)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], serde_json::json!(true));
    assert!(report["witness"]["size"].as_u64().unwrap() >= 2);
}

#[test]
fn ramsey_search_budget_exhaustion_exits_5() {
    let out = bin()
        .args(["ramsey-search", "--t", "2", "--bound", "1", "--budget", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn construct_r4_s3() {
    let out = bin()
        .args(["construct", "--r", "4", "--s", "3", "--m", "2^12", "--seed", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["n"], serde_json::json!(4096));
    let weights = report["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 2);
    assert_eq!(weights[0]["w"], serde_json::json!(64));
}

#[test]
fn scale_cap_env_override() {
    let out = bin()
        .env("GALLAI_MAX_N", "10")
        .args(["gen", "--n", "50", "--r", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn discrepancy_report() {
    let dir = tmpdir();
    let weights = dir.path().join("w.json");
    std::fs::write(
        &weights,
        r#"{"r":4,"weights":[{"pair":[1,2],"w":"6"},{"pair":[3,4],"w":"1/3"}]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["discrepancy", "--s", "3", "--weights"])
        .arg(&weights)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["total"], serde_json::json!("19/3"));
}

#[test]
fn extract_weak_requires_s() {
    let dir = tmpdir();
    let gal = dir.path().join("g.gal");
    bin()
        .args(["gen", "--n", "10", "--r", "4", "--seed", "1", "--out"])
        .arg(&gal)
        .output()
        .unwrap();
    let out = bin()
        .args(["extract", "--alg", "weak", "--file"])
        .arg(&gal)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gal_and_json_formats_agree() {
    let dir = tmpdir();
    let gal = dir.path().join("x.gal");
    let json = dir.path().join("x.json");
    for (path, fmt) in [(&gal, "gal"), (&json, "json")] {
        bin()
            .args(["gen", "--n", "12", "--r", "3", "--seed", "9", "--format", fmt, "--out"])
            .arg(path)
            .output()
            .unwrap();
    }
    let from_gal = PathBuf::from(&gal);
    let a = bin().args(["check", "--file"]).arg(&from_gal).output().unwrap();
    let b = bin().args(["check", "--file"]).arg(&json).output().unwrap();
    assert_eq!(
        strip_timing(stdout_json(&a)),
        strip_timing(stdout_json(&b))
    );
}
