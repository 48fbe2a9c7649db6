use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn system_arg(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn power_sum_example_one() {
    let sys = system_arg("example1.json");
    let out = waring(&["power-sum", "--system", &sys, "--gamma", "0,0", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["sigma"]["value"][0], "17/4");
    assert_eq!(v["result"]["sigma"]["decimal"][0], "4.2500000000000000e0");
    assert_eq!(v["result"]["lattice_value"]["value"][0], "4");
}

#[test]
fn t_and_mode_overrides() {
    let sys = system_arg("example1.json");
    let out = waring(&["power-sum", "--system", &sys, "--gamma", "0,0", "--t", "0", "--report", "json"]);
    assert_eq!(json(&out)["result"]["sigma"]["value"][0], "4");
    let out = waring(&["power-sum", "--system", &sys, "--gamma", "0,0", "--mode", "float", "--report", "json"]);
    let v = json(&out);
    assert_eq!(v["request"]["mode"], "float");
    let x: f64 = v["result"]["sigma"]["value"][0].as_str().unwrap().parse().unwrap();
    assert!((x - 4.25).abs() < 1e-12);
}

#[test]
fn breakdown_totals() {
    let sys = system_arg("quadratic.json");
    let out = waring(&["power-sum", "--system", &sys, "--gamma", "0", "--breakdown", "--report", "json"]);
    let v = json(&out);
    assert_eq!(v["result"]["breakdown"]["entries"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["breakdown"]["total"], v["result"]["sigma"]);
    assert_eq!(v["result"]["sigma"]["value"], serde_json::json!(["8/3", "1"]));
}

#[test]
fn degree_violation_is_rejected() {
    let sys = system_arg("example1_degree_violation.json");
    let out = waring(&["validate", "--system", &sys]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("degree bound: deg_z1 Q[2] = 3 > m[2][1] = 2"), "{text}");
    let out = waring(&["power-sum", "--system", &sys, "--gamma", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn valid_corpus_files() {
    for name in ["example1.json", "example1_float.json", "quadratic.json"] {
        let out = waring(&["validate", "--system", &system_arg(name), "--report", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["valid"], true);
    }
}

#[test]
fn resultant_coefficients() {
    let sys = system_arg("example1.json");
    let out = waring(&["resultant", "--system", &sys, "--order", "3", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let b = v["coefficients"].as_array().unwrap();
    assert_eq!(b.len(), 4);
    assert_eq!(b[0]["value"][0], "1");
    assert_eq!(b[1]["value"][0], "-17/4");
    assert_eq!(v["power_sums"][0]["value"][0], "17/4");
}

#[test]
fn verify_passes() {
    for (name, gamma) in [("example1.json", "0,0"), ("example1_float.json", "1,0")] {
        let out = waring(&["verify", "--system", &system_arg(name), "--gamma", gamma, "--report", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!(v["verification"]["passed"], true);
        assert_eq!(v["verification"]["root_count"], 5);
    }
}

#[test]
fn transform_reports_lattice_roots() {
    let out = waring(&["transform", "--system", &system_arg("example1.json"), "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["transformed"]["permanent"], 5);
    assert_eq!(v["transformed"]["mhat"], serde_json::json!([[1, 2], [2, 1]]));
    assert_eq!(v["lattice_roots"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"n\": 2").unwrap();
    let out = waring(&["power-sum", "--system", path.to_str().unwrap(), "--gamma", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    let out = waring(&["validate", "--system", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = waring(&["power-sum", "--system", &system_arg("example1.json"), "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(waring(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn unsolvable_oracle_is_a_computation_error() {
    // three variables: the root oracle only covers n <= 2
    let doc = r#"{
        "n": 3, "mode": "exact",
        "a": [[["1","0"], ["2","0"], ["3","0"]],
              [["2","0"], ["3","0"], ["1","0"]],
              [["3","0"], ["1","0"], ["2","0"]]],
        "m": [[1,1,1],[1,1,1],[1,1,1]],
        "Q": [[{"coeff": ["1","0"], "exp": [1,1,1]}], [], []],
        "t": "1/10"
    }"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.json");
    std::fs::write(&path, doc).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(waring(&["power-sum", "--system", p, "--gamma", "0,0,0"]).status.code(), Some(0));
    let out = waring(&["verify", "--system", p, "--gamma", "0,0,0", "--quadrature-nodes", "16", "--report", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "unverified");
}

#[test]
fn series_sum_small() {
    let out = waring(&[
        "series-sum", "--family", "example2", "--params", "1,1,1,-1,1", "--smax", "8", "--reference-terms", "1000",
        "--report", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["subsystems"], 64);
    assert!(v["reference"]["total"].is_string());
    let out = waring(&["series-sum", "--params", "1,1,1", "--smax", "8"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    for name in ["example1.json", "example1_float.json"] {
        let sys = system_arg(name);
        let args = ["verify", "--system", &sys, "--gamma", "1,0", "--t", "1/50", "--report", "json"];
        let (a, b) = (waring(&args), waring(&args));
        assert_eq!(a.stdout, b.stdout, "{name}");
        let args = ["power-sum", "--system", &sys, "--gamma", "1,1", "--breakdown"];
        assert_eq!(waring(&args).stdout, waring(&args).stdout, "{name}");
    }
}
