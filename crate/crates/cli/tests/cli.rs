use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qaffine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaffine")).args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

/// Run with `--json`, validate the report against the schema and return (exit code, report).
fn run_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--json", p]);
    let out = qaffine(&all);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let s = schema();
    if let Err(errs) = s.validate(&report) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema violations: {msgs:?}");
    }
    (out.status.code().unwrap(), report)
}

fn goal_names(r: &Value) -> Vec<String> {
    r["goals"].as_array().unwrap().iter().map(|g| g["name"].as_str().unwrap().to_string()).collect()
}

fn status_of<'a>(r: &'a Value, name: &str) -> &'a str {
    r["goals"].as_array().unwrap().iter().find(|g| g["name"] == name).unwrap()["status"].as_str().unwrap()
}

#[test]
fn suite_a2_passes() {
    let (code, r) = run_json(&["suite", "--type", "A2^1"]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "suite");
    assert_eq!(r["type"], "A2^1");
    assert_eq!(r["summary"]["failed"], 0);
    let names = goal_names(&r);
    for n in ["identity/jacobi-right", "cartan/theta", "epsilon/validate", "map/[E0,F1]", "map/checkpoint", "replay/an_e0f0_n2"] {
        assert!(names.iter().any(|g| g == n), "{n} missing");
    }
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let d = r["discrepancies"].as_array().unwrap();
    assert!(d.iter().any(|d| d["location"] == "checkpoint" && d["ratio"] == "-q^-1"));
}

#[test]
fn epsilon_e8_reports_one_discrepancy() {
    let (code, r) = run_json(&["epsilon", "--type", "E8^1"]);
    assert_eq!(code, 0);
    let d = r["discrepancies"].as_array().unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d[0]["printed"], "-16");
    assert_eq!(d[0]["computed"], "-28");
    assert!(!d[0]["citation"].as_str().unwrap().is_empty());
}

#[test]
fn identities_default_run() {
    let (code, r) = run_json(&["identities", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["identities"]["instances"], 500);
    assert!(r["goals"].as_array().unwrap().len() >= 5);
    assert_eq!(r["summary"]["failed"], 0);
}

#[test]
fn parse_errors_exit_2() {
    for args in [&["bogus"][..], &["epsilon", "--window", "x"], &["replay"], &[]] {
        let out = qaffine(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_1() {
    let out = qaffine(&["cartan", "--type", "Q9^1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = qaffine(&["map", "--type", "A3^2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reduce_prints_json() {
    let out = qaffine(&["reduce", "--type", "A2^1", "--expr", "K1·xp1(0) - q^2*xp1(0)·K1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "reduced-to-zero");
    assert_eq!(v["normal_form"], "0");
    assert!(v["steps"].as_u64().unwrap() >= 1);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("e.txt");
    std::fs::write(&f, "xp1(0)·xp2(1)\n").unwrap();
    let out = qaffine(&["reduce", "--type", "A2^1", "--expr", f.to_str().unwrap(), "--budget", "10"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "normal-form");
    assert_eq!(v["normal_form"], "xp1(0)·xp2(1)");
}

#[test]
fn replay_all_certifies() {
    let (code, r) = run_json(&["replay", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["certified"], 13);
    assert!(r["discrepancies"].as_array().unwrap().iter().all(|d| !d["citation"].as_str().unwrap().is_empty()));
}

#[test]
fn replay_file_pulls_in_requirements() {
    let src = qaffine::replay::corpus::bundled_corpus().unwrap();
    let d = src.iter().find(|d| d.name == "an_e1e0e0_n2").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("d.json");
    std::fs::write(&f, serde_json::to_string(d).unwrap()).unwrap();
    let (code, r) = run_json(&["replay", "--file", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(goal_names(&r), ["replay/an_e0_x2_n2", "replay/an_e1e0e0_n2"]);
}

#[test]
fn relations_untwisted_and_twisted() {
    let (code, r) = run_json(&["relations", "--type", "A2^1", "--kind", "serre", "--params", r#"{"sign":"+","i":1,"j":2,"modes":[0,1],"n":0}"#]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["certified"], 1);

    let (code, r) = run_json(&["relations", "--type", "A3^2", "--kind", "aa", "--params", r#"{"i":1,"k":2,"j":1,"l":-2}"#]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"]["certified"], 1);

    // a series kind expands over the window
    let (_, r) = run_json(&["relations", "--type", "A3^2", "--kind", "xx-product", "--params", r#"{"sign":"+","i":1,"j":1,"a":0,"b":0}"#, "--window", "1"]);
    assert_eq!(r["goals"].as_array().unwrap().len(), 9);

    let out = qaffine(&["relations", "--type", "A2^1", "--kind", "serre", "--params", "[1]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn strict_fails_on_inconclusive() {
    let (code, r) = run_json(&["map", "--type", "A2^1", "--inverse"]);
    assert_eq!(code, 0);
    assert!(r["summary"]["inconclusive"].as_u64().unwrap() > 0);
    assert_eq!(r["data"]["inverse"]["a"], "1");
    assert_eq!(r["data"]["inverse"]["b"], "-q^-1");
    let (code, _) = run_json(&["map", "--type", "A2^1", "--inverse", "--strict"]);
    assert_eq!(code, 1);
}

#[test]
fn cartan_theta_for_twisted_types() {
    for (t, theta) in [("A4^2", vec![2, 2]), ("D4^3", vec![2, 1])] {
        let (code, r) = run_json(&["cartan", "--type", t]);
        assert_eq!(code, 0);
        assert_eq!(status_of(&r, "cartan/theta"), "certified");
        let got: Vec<i64> = r["data"]["cartan"]["theta"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        assert_eq!(got, theta);
    }
}

#[test]
fn output_is_deterministic() {
    let strip = |mut r: Value| {
        r["timings"] = Value::Null;
        for g in r["goals"].as_array_mut().unwrap() {
            g["time_ms"] = Value::Null;
        }
        r
    };
    let (_, a) = run_json(&["suite", "--type", "A3^2", "--seed", "3"]);
    let (_, b) = run_json(&["suite", "--type", "A3^2", "--seed", "3"]);
    assert_eq!(strip(a), strip(b));
}
