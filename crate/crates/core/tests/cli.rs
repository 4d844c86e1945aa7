use std::path::{Path, PathBuf};

use rado_core::cli::dispatch;
use serde_json::Value;

fn systems() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rado").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn schur() -> String {
    systems().join("schur.json").display().to_string()
}

#[test]
fn classify_reports_flags_and_densities() {
    let doc = json(&["classify", &schur()]);
    assert_eq!(doc["command"], "classify");
    assert_eq!(doc["system"]["rows"], serde_json::json!([[1, 1, -1]]));
    let r = &doc["result"];
    assert_eq!(r["partitionRegular"], true);
    assert_eq!(r["densityRegular"], false);
    assert_eq!(r["m1"]["value"], "2");
    assert_eq!(r["m"]["value"], "3/2");
    assert!(doc["version"].is_string());

    let chain = systems().join("chain.json").display().to_string();
    let r = &json(&["classify", &chain])["result"];
    assert_eq!(r["abundant"], false);
    assert!(r["m1"].is_null());
}

#[test]
fn counting_and_enumeration() {
    let r = &json(&["count", &schur(), "--n", "5", "--class", "proper"])["result"];
    assert_eq!(r["count"], 8);
    let r = &json(&["count", &schur(), "--n", "5", "--class", "nontrivial"])["result"];
    assert_eq!(r["count"], 10);
    let r = &json(&["enumerate", &schur(), "--n", "4", "--class", "proper", "--limit", "2"])["result"];
    assert_eq!(r.as_array().unwrap().len(), 2);
}

#[test]
fn subsystem_degrees_and_extremal() {
    let chain = systems().join("chain.json").display().to_string();
    let (code, out, _) = run(&["subsystem", &chain, "--cols", "1,2,4"]);
    assert_eq!(code, 0);
    assert!(out.contains("[[1,1,-1]]"), "{out}");
    let r = &json(&["degrees", &schur(), "--n", "5", "--ell", "1"])["result"];
    assert_eq!(r[0]["maxDegree"], 6);
    let r = &json(&["extremal", &schur(), "--n", "5,10"])["result"];
    assert_eq!(r[0]["value"], 3);
    assert_eq!(r[1]["value"], 6);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let (code, _, err) = run(&[
        "sweep", &schur(), "--n", "200", "--C", "0.1,10", "--trials", "20", "--seed", "7",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("system,"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    };
    let ragged = write("ragged.json", r#"{"rows":[[1,1],[1]]}"#);
    let empty = write("empty.json", r#"{"rows":[]}"#);
    let broken = write("broken.json", "{");
    let missing = dir.path().join("missing.json").display().to_string();

    assert_eq!(run(&["classify", &ragged]).0, 4);
    assert_eq!(run(&["classify", &empty]).0, 5);
    assert_eq!(run(&["classify", &broken]).0, 2);
    assert_eq!(run(&["classify", &missing]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["count", &schur()]).0, 1);
    assert_eq!(run(&["count", &schur(), "--n", "5", "--class", "weird"]).0, 1);
    assert_eq!(run(&["subsystem", &schur(), "--cols", "9"]).0, 1);
    assert_eq!(run(&["subsystem", &schur(), "--cols", "1"]).0, 1);
    assert_eq!(run(&["extremal", &schur(), "--n", "40", "--node-limit", "1"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["--json", "simulate", &schur(), "--n", "300", "--p", "0.05", "--trials", "30", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}
