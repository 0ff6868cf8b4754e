use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn rpaving(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpaving"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn matrix_file(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn detr_swap_matrix() {
    let m = matrix_file("swap.json", r#"{"n": 2, "entries": [["0", "1"], ["1", "0"]]}"#);
    let out = rpaving(&["detr", "--r", "2", "--matrix", path_str(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "-2");
    assert_eq!(v["agreement"], true);
    assert_eq!(v["methods"].as_array().unwrap().len(), 3);
}

#[test]
fn detr_r1_is_determinant() {
    let m = matrix_file("det.json", r#"{"n": 2, "entries": [["2", "1"], ["1", "3"]]}"#);
    let v = json(&rpaving(&["detr", "--r", "1", "--matrix", path_str(&m)]));
    assert_eq!(v["value"], "5");
}

#[test]
fn detr_fractional_r_on_all_ones() {
    let m = matrix_file(
        "j4.json",
        r#"{"n": 4, "entries": [["1","1","1","1"],["1","1","1","1"],["1","1","1","1"],["1","1","1","1"]]}"#,
    );
    let v = json(&rpaving(&["detr", "--r", "3/2", "--matrix", path_str(&m)]));
    assert_eq!(v["method"], "macmahon");
    assert_eq!(v["agreement"], true);
    let methods: Vec<&str> = v["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["macmahon", "perm-cycle"]);
}

#[test]
fn chir_is_real_rooted() {
    let m = matrix_file("chir.json", r#"{"n": 2, "entries": [["0", "1"], ["1", "0"]]}"#);
    let v = json(&rpaving(&["chir", "--r", "2", "--matrix", path_str(&m)]));
    assert_eq!(v["coeffs"], serde_json::json!(["-2", "0", "4"]));
    assert_eq!(v["real_rooted"], true);
}

#[test]
fn pavings_identity_holds() {
    let m = matrix_file(
        "pav.json",
        r#"{"n": 3, "entries": [["1","1/2","0"],["1/2","0","-1"],["0","-1","2"]]}"#,
    );
    let out = rpaving(&["pavings", "--r", "3", "--matrix", path_str(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["count"], "27");
}

#[test]
fn bound_closed_forms() {
    let v = json(&rpaving(&["bound", "--delta", "0.5", "--r", "4"]));
    assert!((v["bound"].as_f64().unwrap() - (3.0 + 7f64.sqrt()).powi(2) / 32.0).abs() < 1e-12);
    let v = json(&rpaving(&["bound", "--delta", "0", "--r", "2"]));
    assert!((v["bound"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn bound_warns_when_clamped() {
    let out = rpaving(&["bound", "--delta", "0.5", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["bound"], 1.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn bound_certify_on_projection() {
    let m = matrix_file(
        "p41.json",
        r#"{"n": 4, "entries": [["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"]]}"#,
    );
    let v = json(&rpaving(&["bound", "--matrix", path_str(&m), "--r", "2", "--certify"]));
    assert!(v["certified_max_root"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
}

#[test]
fn verify_passes_in_both_modes() {
    let out = rpaving(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 10);
    let out = rpaving(&["verify", "--mode", "float", "--tolerance", "1e-8"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_fault_names_the_check() {
    let out = rpaving(&["verify", "--fault", "thompson"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["tag"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["thompson"]);
    assert!(v["checks"][4]["failure"]["matrix"].is_object());
}

#[test]
fn verify_csv_has_one_row_per_check() {
    let out = rpaving(&["verify", "--output", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().any(|l| l.starts_with("chiexp,")));
}

#[test]
fn search_is_reproducible() {
    let args = ["search", "statement", "--n", "4", "--budget", "1000", "--seed", "1"];
    let a = rpaving(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, rpaving(&args).stdout);
    let m = matrix_file(
        "greedy.json",
        r#"{"n": 3, "entries": [["1","1/2","0"],["1/2","0","-1"],["0","-1","2"]]}"#,
    );
    let g = ["search", "paving", "--matrix", path_str(&m), "--greedy", "--seed", "3"];
    assert_eq!(rpaving(&g).stdout, rpaving(&g).stdout);
    let exhaustive = json(&rpaving(&["search", "paving", "--matrix", path_str(&m)]));
    let greedy = json(&rpaving(&g));
    assert!(exhaustive["best"]["value"].as_f64() <= greedy["best"]["value"].as_f64());
}

#[test]
fn stability_paving_measure_matches() {
    let out = rpaving(&["stability", "--n", "2", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["differential_formula_matches"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(rpaving(&["detr"]).status.code(), Some(2));
    assert_eq!(rpaving(&["bound", "--delta", "1.5"]).status.code(), Some(2));
    assert_eq!(rpaving(&["verify", "--fault", "nope"]).status.code(), Some(2));
    assert_eq!(rpaving(&["detr", "--r", "0"]).status.code(), Some(2));
    let bad = matrix_file("bad.json", "{not json");
    assert_eq!(rpaving(&["detr", "--matrix", path_str(&bad)]).status.code(), Some(2));
    let asym = matrix_file("asym.json", r#"{"n": 2, "entries": [["0", "1"], ["2", "0"]]}"#);
    assert_eq!(rpaving(&["chir", "--matrix", path_str(&asym)]).status.code(), Some(2));
    let big: Vec<Vec<String>> = (0..13).map(|_| (0..13).map(|_| "0".to_string()).collect()).collect();
    let big = matrix_file("big.json", &serde_json::json!({"n": 13, "entries": big}).to_string());
    assert_eq!(rpaving(&["detr", "--matrix", path_str(&big)]).status.code(), Some(3));
}
