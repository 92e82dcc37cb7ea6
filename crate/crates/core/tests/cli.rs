use std::process::Command;

use patlab::cli::run_capture;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let (code, text) = run_capture(std::iter::once("patlab").chain(args.iter().copied()));
    assert_eq!(code, 0, "{args:?}: {text}");
    (code, serde_json::from_str(&text).unwrap())
}

fn fails(args: &[&str]) -> (i32, String) {
    let (code, text) = run_capture(std::iter::once("patlab").chain(args.iter().copied()));
    assert_ne!(code, 0, "{args:?} unexpectedly succeeded");
    (code, text)
}

#[test]
fn basic_tent_four() {
    let (_, v) = run(&["basic", "--map", "tent", "--n", "4"]);
    assert_eq!(v["result"]["patterns"], serde_json::json!(["1423", "2134", "2143", "3142", "4231"]));
    assert_eq!(v["exact"], true);
    assert_eq!(v["n"], 4);
    assert_eq!(v["map"]["type"], "tent");
    assert!(v["engine_version"].as_str().unwrap().starts_with("patlab-"));
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn shortest_and_counts() {
    let (_, v) = run(&["shortest", "--map", "sawtooth:3", "--n-max", "8"]);
    assert_eq!(v["result"], 5);
    let (_, v) = run(&["avoiders", "--patterns", "132,231", "--n", "5", "--count-only"]);
    assert_eq!(v["result"], 16);
    let (_, v) = run(&["count", "--patterns", "321", "--n", "4"]);
    assert_eq!(v["result"], 17);
    let (_, v) = run(&["prop6", "--lengths", "3,3"]);
    assert_eq!(v["result"]["satisfied"], true);
    let (_, v) = run(&["check-basis", "--patterns", "132,231", "--m-max", "5"]);
    assert_eq!(v["result"]["obstructed"], serde_json::json!([1, 2, 3, 4, 5]));
}

#[test]
fn logistic_four_goes_through_the_tent() {
    let (_, v) = run(&["allowed", "--map", "logistic:4", "--n", "3"]);
    assert_eq!(v["result"]["patterns"].as_array().unwrap().len(), 5);
    assert!(v["note"].as_str().unwrap().contains("order-isomorphism"));
    let (_, v) = run(&["sample", "--map", "logistic:3.5", "--n", "3", "--grid", "1000", "--random", "1000"]);
    assert_eq!(v["exact"], false);
}

#[test]
fn csv_output() {
    let (code, text) = run_capture(["patlab", "--format", "csv", "basic", "--map", "tent", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(text.contains("321"), "{text}");
}

#[test]
fn exit_codes() {
    // bad input
    assert_eq!(fails(&["allowed", "--map", "nonsense", "--n", "3"]).0, 2);
    assert_eq!(fails(&["avoiders", "--patterns", "12,123", "--n", "3"]).0, 2);
    assert_eq!(fails(&["allowed", "--map", "tent", "--n", "12"]).0, 2);
    assert_eq!(fails(&["allowed", "--map", "logistic:3.5", "--n", "3"]).0, 2);
    assert_eq!(fails(&["allowed", "--map", "tent"]).0, 2);
    // resource limit
    assert_eq!(fails(&["allowed", "--map", "sawtooth:4", "--n", "12", "--unsafe"]).0, 3);
}

#[test]
fn gap_is_a_validation_error() {
    let gap = r#"{"type":"pwl","pieces":[
        {"lo":"0","hi":"1/2","slope":"1","intercept":"0"},
        {"lo":"1/2","lo_closed":false,"hi":"1","hi_closed":true,"slope":"1","intercept":"0"}]}"#;
    let (code, text) = fails(&["allowed", "--map", gap, "--n", "2"]);
    assert_eq!(code, 2);
    assert!(text.contains("gap"), "{text}");
}

#[test]
fn pwl_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tent.json");
    let spec = patlab::mapspec::MapSpec::from_pwl(&patlab::PwlMap::tent());
    std::fs::write(&path, spec.to_json()).unwrap();
    let (_, from_file) = run(&["basic", "--map", path.to_str().unwrap(), "--n", "4"]);
    let (_, from_catalog) = run(&["basic", "--map", "tent", "--n", "4"]);
    assert_eq!(from_file["result"], from_catalog["result"]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, text) = run_capture(["patlab", "--out", path.to_str().unwrap(), "basic", "--map", "tent", "--n", "3"]);
    assert_eq!((code, text.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["patterns"], serde_json::json!(["321"]));
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_patlab");
    let go = |cache: Option<&std::path::Path>| {
        let mut cmd = Command::new(bin);
        cmd.args(["basic", "--map", "tent", "--n", "6"]);
        match cache {
            Some(d) => cmd.env("PATLAB_CACHE_DIR", d),
            None => cmd.env_remove("PATLAB_CACHE_DIR"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        serde_json::to_string(&v["result"]).unwrap()
    };
    let fresh = go(None);
    let first = go(Some(dir.path()));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let stored = std::fs::read(entries[0].as_ref().unwrap().path()).unwrap();
    let second = go(Some(dir.path()));
    assert_eq!(fresh, first);
    assert_eq!(first, second);
    let stored: Value = serde_json::from_slice(&stored).unwrap();
    assert_eq!(serde_json::to_string(&stored).unwrap(), fresh);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_patlab");
    let out = Command::new(bin).args(["allowed", "--map", "nonsense", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
