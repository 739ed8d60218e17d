use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn wrcollapse(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wrcollapse"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn maximal(v: &Value) -> usize {
    v["maximal"].as_array().unwrap().len()
}

#[test]
fn build_variants() {
    let wr = json(&wrcollapse(&["build", "--n", "2", "--l", "0", "--stats"], None));
    assert_eq!(maximal(&wr), 25);
    assert_eq!(wr["stats"]["euler"], 1);
    assert_eq!(wr["stats"]["faces"], serde_json::json!([12, 36, 25]));
    let chi = json(&wrcollapse(&["build", "--n", "2", "--chromatic"], None));
    assert_eq!(maximal(&chi), 13);
    let it = json(&wrcollapse(&["build", "--n", "1", "--iterated", "2"], None));
    assert_eq!(maximal(&it), 9);
    assert_eq!(it["carrier"].as_object().unwrap().len(), 10);
    assert!(it["nodes"].is_object());
}

#[test]
fn count_levels() {
    let v = json(&wrcollapse(&["count", "--n", "2"], None));
    let profiles: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["profiles"].as_u64().unwrap()).collect();
    assert_eq!(profiles, vec![25, 13, 13]);
}

#[test]
fn collapse_then_verify() {
    for args in [
        vec!["collapse", "--n", "2", "--equivariant", "--l", "0"],
        vec!["collapse", "--n", "2", "--void"],
        vec!["collapse", "--n", "2", "--lambda", "1"],
        vec!["collapse", "--n", "2", "--full"],
        vec!["collapse", "--n", "1", "--iterated", "2"],
    ] {
        let trace = wrcollapse(&args, None);
        assert!(trace.status.success(), "{args:?}");
        let text = String::from_utf8(trace.stdout).unwrap();
        let report = json(&wrcollapse(&["verify"], Some(&text)));
        assert_eq!(report["ok"], true, "{args:?}");
    }
    let eq = json(&wrcollapse(&["collapse", "--n", "2", "--equivariant", "--l", "0"], None));
    assert_eq!(eq["steps"].as_array().unwrap().len(), 2);
    let it = json(&wrcollapse(&["collapse", "--n", "1", "--iterated", "2"], None));
    assert_eq!(maximal(&it["target"]), 9);
}

#[test]
fn mutated_trace_fails_verification() {
    let mut t = json(&wrcollapse(&["collapse", "--n", "2", "--l", "0"], None));
    t["steps"].as_array_mut().unwrap().reverse();
    let out = wrcollapse(&["verify"], Some(&t.to_string()));
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], false);
    assert!(report["detail"].as_str().unwrap().contains("StepNotFree"));
}

#[test]
fn simulate_modes() {
    let seq = json(&wrcollapse(&["simulate", "--n", "2", "--sequential", "0,1,2"], None));
    assert_eq!(seq["profile"]["views"]["0"], serde_json::json!([0]));
    let ex = json(&wrcollapse(&["simulate", "--n", "2", "--exhaustive"], None));
    assert_eq!(ex["count"], 13);
    let desc = r#"{"n":2,"scheduler":{"kind":"seeded-random","seed":5}}"#;
    let a = wrcollapse(&["simulate"], Some(desc));
    let b = wrcollapse(&["simulate"], Some(desc));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn export_formats() {
    let chi = wrcollapse(&["build", "--n", "2", "--chromatic"], None);
    let chi = String::from_utf8(chi.stdout).unwrap();
    let dot = wrcollapse(&["export", "--format", "dot"], Some(&chi));
    assert!(dot.status.success());
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph"));
    let off = wrcollapse(&["export", "--format", "off"], Some(&chi));
    let off = String::from_utf8(off.stdout).unwrap();
    assert!(off.starts_with("OFF"));
    assert!(off.lines().nth(1).unwrap().starts_with("12 13"));
}

#[test]
fn exit_codes() {
    assert_eq!(wrcollapse(&["build", "--n", "4"], None).status.code(), Some(3));
    assert_eq!(wrcollapse(&["build", "--n", "2", "--l", "5"], None).status.code(), Some(2));
    assert_eq!(wrcollapse(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(wrcollapse(&["verify"], Some("{}")).status.code(), Some(2));
    assert_eq!(wrcollapse(&["--help"], None).status.code(), Some(0));
}
