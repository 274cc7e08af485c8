use std::process::{Command, Output};

use serde_json::Value;

fn kirbycalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kirbycalc"))
        .args(args)
        .env_remove("KIRBYCALC_SKEIN_CAP")
        .output()
        .expect("run kirbycalc")
}

fn json_value(args: &[&str]) -> (f64, f64) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = kirbycalc(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    (v["value"][0].as_f64().unwrap(), v["value"][1].as_f64().unwrap())
}

fn near(got: (f64, f64), re: f64) {
    assert!((got.0 - re).abs() < 1e-9 && got.1.abs() < 1e-9, "{got:?} != {re}");
}

#[test]
fn documented_invariants() {
    near(json_value(&["invariant", "--library", "S1xS1xS2", "--backend", "pointed", "--factors", "5", "--anyonic"]), 5.0);
    near(json_value(&["invariant", "--library", "S1xS3", "--backend", "group", "--group", "s3"]), 6.0);
    near(json_value(&["invariant", "--library", "S4", "--backend", "templieb", "--r", "4", "--functor", "integer-spins"]), 1.0);
}

#[test]
fn group_values_are_exact() {
    let out = kirbycalc(&["invariant", "--library", "S1xS1xS2", "--backend", "group", "--group", "s3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact"], "18");
}

#[test]
fn resource_limit_exits_3() {
    let out = kirbycalc(&["invariant", "--library", "S1xS1xS2", "--backend", "templieb", "--r", "4", "--functor", "integer-spins"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ResourceLimit");
    assert_eq!((err["needed"].as_u64(), err["cap"].as_u64()), (Some(32), Some(24)));
    let raised = Command::new(env!("CARGO_BIN_EXE_kirbycalc"))
        .args(["invariant", "--library", "S1xS1xS2", "--backend", "templieb", "--r", "4", "--functor", "integer-spins", "--format", "json"])
        .env("KIRBYCALC_SKEIN_CAP", "32")
        .output()
        .unwrap();
    assert!(raised.status.success());
    let v: Value = serde_json::from_slice(&raised.stdout).unwrap();
    assert!((v["value"][0].as_f64().unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn invalid_targets_exit_2() {
    let out = kirbycalc(&["invariant", "--library", "S4", "--backend", "pointed", "--factors", "6", "--anyonic"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "InvalidTarget");
    let out = kirbycalc(&["invariant", "--library", "Klein", "--backend", "group", "--group", "s3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_bad_categories() {
    let dir = std::env::temp_dir().join(format!("kirbycalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("z2.json");
    std::fs::write(&bad, r#"{"factors": [2], "q": {"0": "0", "1": "1/3"}}"#).unwrap();
    let fermion = dir.join("fermion.json");
    std::fs::write(&fermion, r#"{"factors": [2], "q": {"0": "0", "1": "1/2"}}"#).unwrap();
    let good = dir.join("z3.json");
    std::fs::write(&good, r#"{"factors": [3], "q": {"0": "0", "1": "1/3", "2": "1/3"}}"#).unwrap();
    let out = kirbycalc(&["validate", "--category", good.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // q(1) = 1/3 on Z2 is not a quadratic form
    let out = kirbycalc(&["validate", "--category", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // a transparent fermion is a fine category but not a valid target
    let out = kirbycalc(&["validate", "--category", fermion.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["category"]["valid"], false);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exported_diagrams_read_back() {
    let out = kirbycalc(&["library", "export", "S1xS1xS2"]);
    assert!(out.status.success());
    let path = std::env::temp_dir().join(format!("kirbycalc-export-{}.json", std::process::id()));
    std::fs::write(&path, &out.stdout).unwrap();
    near(json_value(&["invariant", "--diagram", path.to_str().unwrap(), "--backend", "group", "--group", "s3"]), 18.0);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn output_is_stable() {
    let args = ["check-moves", "--backend", "pointed", "--factors", "3", "--anyonic", "--trials", "10", "--seed", "4"];
    let (a, b) = (kirbycalc(&args), kirbycalc(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let table = ["table", "--backend", "group", "--group", "s3", "--format", "csv"];
    let (a, b) = (kirbycalc(&table), kirbycalc(&table));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("S1xS1xS2,0,0,18,0,18,0,yes")), "{text}");
}

#[test]
fn pi1_counts() {
    let out = kirbycalc(&["pi1", "--library", "S1xS1xS2", "--group", "s3", "--group", "z3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("homs to S3: 18"), "{text}");
    assert!(text.contains("homs to Z3: 9"), "{text}");
}
