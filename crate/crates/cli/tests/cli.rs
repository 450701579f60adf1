use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const PRESETS: [&str; 6] = [
    "remark-3.5-z2-blocks",
    "remark-3.5-torus",
    "remark-3.5-solenoid",
    "prop-2.7-exhaustive",
    "theorem-2.1-z25",
    "tower-5-7",
];

fn heyde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heyde")).args(args).output().expect("binary runs")
}

fn run_text(dir: &Path, name: &str, text: &str, extra: &[&str]) -> (i32, Value, String) {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = heyde(&args);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn presets_pass() {
    for name in PRESETS {
        let out = heyde(&["preset", name]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["status"], "pass", "{name}");
        assert!(v["expectations"].as_array().unwrap().iter().all(|e| e["ok"] == true));
        assert!(v.get("timing").is_none());
    }
}

#[test]
fn list_presets_names_all() {
    let out = heyde(&["list-presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in PRESETS {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn haar_on_z4_with_identity() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "haar-condition", "groups": {"list": [{"orders": [4]}]}, "alpha": {"scalar": 1}}"#;
    let (code, v, _) = run_text(dir.path(), "z4.json", text, &[]);
    assert_eq!(code, 0);
    let case = &v["verdict"]["groups"][0]["cases"][0];
    assert_eq!(case["condition"], false);
    assert_eq!(case["oracle_symmetric"], false);
    assert_eq!(case["agree"], true);
    assert!(case["witness"].is_object());
    assert_eq!(v["hypotheses"]["minus_automorphism"], false);
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run_text(
        dir.path(),
        "zero.json",
        r#"{"kind": "enumerate-solutions", "group": {"orders": [0]}, "alpha": {"scalar": 1}}"#,
        &[],
    );
    assert_eq!(code, 2);
    assert!(err.contains("group.orders"), "{err}");
    let (code, _, err) = run_text(
        dir.path(),
        "typo.json",
        r#"{"kind": "enumerate-solutions", "group": {"orders": [5]}, "alpha": {"scalr": 1}}"#,
        &[],
    );
    assert_eq!(code, 2);
    assert!(err.contains("alpha"), "{err}");
    let (code, _, err) = run_text(dir.path(), "kind.json", r#"{"kind": "nonsense"}"#, &[]);
    assert_eq!(code, 2);
    assert!(err.contains("kind"), "{err}");
    let (code, _, err) = run_text(
        dir.path(),
        "expect.json",
        r#"{"kind": "enumerate-solutions", "group": {"orders": [5]}, "alpha": {"scalar": 2}, "expect": {"nope": 1}}"#,
        &[],
    );
    assert_eq!(code, 2);
    assert!(err.contains("expect.nope"), "{err}");
    assert_eq!(heyde(&["preset", "missing"]).status.code(), Some(2));
}

#[test]
fn hypothesis_guard_exits_two_unless_exploratory() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        r#"{"kind": "verify-theorem", "group": {"orders": [4]}, "alpha": {"scalar": 1}, "families": ["point-masses"]}"#;
    let (code, _, err) = run_text(dir.path(), "guard.json", text, &[]);
    assert_eq!(code, 2);
    assert!(err.contains("hypothesis"), "{err}");
    let explore = text.replace("\"point-masses\"]", "\"point-masses\"], \"exploratory\": true");
    let (code, v, _) = run_text(dir.path(), "explore.json", &explore, &[]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["cases"][0]["assertive"], false);
}

#[test]
fn failed_property_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "check-symmetry", "group": {"orders": [5]}, "alpha": {"scalar": 2},
        "mu1": {"dirac": [1]}, "mu2": {"dirac": [1]}, "expect": {"symmetric": true}}"#;
    let (code, v, _) = run_text(dir.path(), "fail.json", text, &[]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    let oracle = &v["verdict"]["oracle"];
    assert_eq!(oracle["symmetric"], false);
    assert!(oracle["witness"].is_object());
    assert_eq!(oracle["witness_rechecks"], true);
    assert_eq!(v["verdict"]["equation"]["witness_rechecks"], true);
}

#[test]
fn iteration_on_symmetric_pair() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "check-symmetry", "group": {"orders": [5]}, "alpha": {"scalar": 2},
        "mu1": {"dirac": [3]}, "mu2": {"dirac": [1]}, "depth": 3}"#;
    let (code, v, err) = run_text(dir.path(), "iter.json", text, &[]);
    assert_eq!(code, 0, "{err}");
    let it = &v["verdict"]["iteration"];
    assert_eq!(it["applied_to"], "symmetrized pair");
    assert_eq!(it["all_hold"], true);
    assert_eq!(it["depths"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "check-symmetry", "seed": 11, "group": {"orders": [3, 9]}, "alpha": {"matrix": [[1, 1], [0, 2]]},
        "mu1": {"random": {"bound": 3}}, "mu2": {"mixture": [{"weight": "1/3", "dist": "haar"}, {"weight": "2/3", "dist": {"random": {}}}]}}"#;
    fs::write(dir.path().join("s.json"), text).unwrap();
    let scenario = dir.path().join("s.json");
    let mut reports = Vec::new();
    for (i, jobs) in ["1", "2", "1"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let o = heyde(&["run", scenario.to_str().unwrap(), "--jobs", jobs, "--out", out.to_str().unwrap()]);
        assert!(o.status.code().unwrap() < 2, "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(fs::read(out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
    let a = heyde(&["preset", "prop-2.7-exhaustive", "--jobs", "3"]).stdout;
    let b = heyde(&["preset", "prop-2.7-exhaustive", "--jobs", "1"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn seed_override_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "counterexample-suite", "group": {"orders": [2, 2]}, "alpha": {"blocks": [[0, 1], [1, 1]]}, "trials": 5}"#;
    let (_, a, _) = run_text(dir.path(), "a.json", text, &["--seed", "1"]);
    let (_, b, _) = run_text(dir.path(), "b.json", text, &["--seed", "2", "--timing"]);
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
    assert!(b["timing"]["elapsed_ms"].is_u64());
    assert_ne!(a["verdict"], b["verdict"]);
}

#[test]
fn every_kind_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"kind": "enumerate-solutions", "group": {"orders": [3, 3]}, "alpha": {"matrix": [[0, 1], [1, 1]]}}"#,
        r#"{"kind": "truncation-sweep", "primes": [5], "levels": 2, "alpha": {"scalar": 2}, "check": {"theorem": "haar-shifts"}}"#,
        r#"{"kind": "haar-condition", "groups": {"list": [{"orders": [9]}]}, "alpha": "all", "subgroups": true}"#,
        r#"{"kind": "verify-theorem", "group": {"orders": [5]}, "alpha": "admissible", "families": [{"random": {"trials": 20}}], "cross_check": true}"#,
        r#"{"kind": "gaussian-check", "torus": {"a1": [["2"]], "a2": [["1"]], "alpha": [[-1]], "radius": 4}}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let (code, v, err) = run_text(dir.path(), &format!("k{i}.json"), text, &[]);
        assert_eq!(code, 0, "case {i}: {err}");
        assert_eq!(v["status"], "pass");
    }
}
