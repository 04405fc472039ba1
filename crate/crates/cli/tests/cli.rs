use std::process::{Command, Output};

use serde_json::Value;

fn twoelem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoelem")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = twoelem(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn triple(v: &Value) -> (i64, i64, i64) {
    (v["r"].as_i64().unwrap(), v["l"].as_i64().unwrap(), v["delta"].as_i64().unwrap())
}

#[test]
fn lattice_info_examples() {
    let v = json_of(&["lattice-info", "U+U+E8(2)", "--format", "json"]);
    assert_eq!(triple(&v), (12, 8, 0));
    assert_eq!(v["sigma"], -8);
    let v = json_of(&["lattice-info", "A1", "--format", "json"]);
    assert_eq!(triple(&v), (1, 1, 1));
    assert_eq!(v["characteristic"][0], "1/2");
    let v = json_of(&["lattice-info", "U+U(2)+D4+D4", "--format", "json"]);
    assert_eq!(v["l"], 6);
    let text = stdout(&twoelem(&["lattice-info", "U+A1plus"]));
    assert!(text.contains("(r, l, δ)  (3,1,1)"), "{text}");
}

#[test]
fn parse_errors_carry_a_position() {
    let o = twoelem(&["lattice-info", "U+(E8"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("column 6"), "{err}");
    assert!(err.contains("     ^"), "{err}");
}

#[test]
fn flag_validation() {
    assert!(!twoelem(&["siegel", "eval", "--sigma", "[[[0,1]]]", "--prec", "40"]).status.success());
    assert!(!twoelem(&["qseries", "A1plus", "--order", "0"]).status.success());
    assert!(!twoelem(&["qseries", "A1plus", "--order", "x/2"]).status.success());
    assert!(!twoelem(&["verify", "nonsense"]).status.success());
    assert!(!twoelem(&["lattice-info", "A1", "--format", "dot"]).status.success());
}

#[test]
fn verify_summary() {
    let v = json_of(&["verify", "graph"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_all_passes() {
    let o = twoelem(&["verify", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 15);
}

#[test]
fn graph_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graph.json");
    let p = path.to_str().unwrap();
    assert!(twoelem(&["export-graph", "--format", "json", "--out", p]).status.success());
    let first = std::fs::read(&path).unwrap();
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert!(v["vertices"].as_array().unwrap().len() >= 43);
    assert_eq!(v["table"].as_array().unwrap().len(), 43);
    // Re-export through the importer is byte-identical, and so is a second run.
    let again = twoelem(&["import-graph", p, "--format", "json"]);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    assert_eq!(again.stdout, first);
    assert!(twoelem(&["export-graph", "--format", "json", "--out", p]).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), first);
    let dot = twoelem(&["import-graph", p, "--format", "dot"]);
    assert_eq!(dot.stdout, twoelem(&["export-graph"]).stdout);
}

#[test]
fn corrupted_graph_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graph.json");
    let mut v = json_of(&["export-graph", "--format", "json"]);
    v["edges"][0]["target"][0] = Value::from(21);
    std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
    assert_eq!(twoelem(&["import-graph", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn dot_shape() {
    let dot = stdout(&twoelem(&["export-graph"]));
    assert!(dot.starts_with("digraph K3 {"));
    assert!(dot.contains("style=dotted"));
    assert!(dot.contains("label=\"(20,2,1) g=0\""));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn qseries_is_deterministic() {
    let a = twoelem(&["qseries", "U+U+E8", "--order", "3", "--format", "json"]);
    let b = twoelem(&["qseries", "U+U+E8", "--order", "3", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let terms = &v["components"][0]["terms"];
    assert_eq!(terms[0], serde_json::json!(["-1", "1"]));
    assert_eq!(terms[1], serde_json::json!(["0", "504"]));
}

#[test]
fn borcherds_report_weights() {
    let v = json_of(&["borcherds", "report", "U+U(2)+E8(2)", "--format", "json"]);
    assert_eq!(v["weight"], "4");
    assert_eq!(v["weight_closed_form"], 4);
    assert_eq!(v["d_prime"], "1");
    let v = json_of(&["borcherds", "report", "U+U+E8(2)+A1", "--format", "json"]);
    assert_eq!(v["weight"], "15");
    assert_eq!(v["d_double_prime"], "5");
}

#[test]
fn siegel_eval_reports_vanishing() {
    let v = json_of(&["siegel", "eval", "--sigma", "[[[0.1,1.1],[0,0]],[[0,0],[-0.3,0.8]]]", "--format", "json"]);
    assert_eq!(v["g"], 2);
    assert!(v["log_chi8_petersson"].is_null());
    assert_eq!(v["thetas"].as_array().unwrap().iter().filter(|t| t["vanishes"] == true).count(), 1);
    let v = json_of(&["siegel", "eval", "--sigma", "[[[0.1,1.1],[0.2,0.3]],[[0.2,0.3],[-0.3,0.8]]]", "--format", "json", "--prec", "96"]);
    assert!(v["log_chi8_petersson"].is_f64());
    assert!(v["thetas"].as_array().unwrap().iter().all(|t| t["vanishes"] == false));
}

#[test]
fn thread_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_twoelem")).args(["verify", "graph"]).env("TWOELEM_THREADS", "1").output().unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_twoelem")).args(["verify", "graph"]).env("TWOELEM_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
