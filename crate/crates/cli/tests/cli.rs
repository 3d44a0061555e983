use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conic-forge"))
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("CONIC_FORGE_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn verify_hpt_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let o = run(&["--out", &out, "verify-hpt", "--prime", "41"], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["report.json", "run.json", "bundle.json", "factors.json", "graph.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["manifest"]["command"], "verify-hpt");
    assert_eq!(report["manifest"]["primes"], serde_json::json!([41]));
    let stdout: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stdout, report);
    let record = json(&dir.path().join("run.json"));
    assert!(record["timings"].is_object());
    assert_eq!(record["manifest"], report["manifest"]);
}

#[test]
fn report_is_byte_identical_across_runs_and_thread_counts() {
    let mut reports = Vec::new();
    for threads in ["1", "4", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().display().to_string();
        let o = run(&["--out", &out, "verify-hpt", "--prime", "41"], Some(threads));
        assert_eq!(code(&o), 0);
        reports.push(std::fs::read(dir.path().join("report.json")).unwrap());
        let record = json(&dir.path().join("run.json"));
        assert_eq!(record["threads"], serde_json::json!(threads.parse::<u64>().unwrap()));
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["verify-hpt", "--prime", "5"], None)), 2);
    assert_eq!(code(&run(&["verify-hpt", "--prime", "45"], None)), 2);
    assert_eq!(code(&run(&["build-example", "--prime", "31"], None)), 2);
    assert_eq!(code(&run(&["verify-hpt"], None)), 2);
    assert_eq!(code(&run(&["no-such-command"], None)), 2);
    assert_eq!(code(&run(&["verify-hpt", "--prime", "41"], Some("many"))), 2);

    let bad = write(dir.path(), "bad.json", "{oops");
    assert_eq!(code(&run(&["brauer", &bad], None)), 2);
    assert_eq!(code(&run(&["check-bundle", &bad], None)), 2);
    let missing = dir.path().join("missing.json").display().to_string();
    assert_eq!(code(&run(&["brauer", &missing], None)), 2);

    let asym = write(
        dir.path(),
        "asym.json",
        r#"{"p":101,"variables":["S","T","U","V"],"entries":["S","T","U","V","S+T","U+V","S","T","U"]}"#,
    );
    let o = run(&["check-bundle", &asym], None);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let wrong_type = write(
        dir.path(),
        "type.json",
        r#"{"p":41,"variables":["S","T","U","V"],"type":[0,0,0],"entries":["V^2","U^2 - V^2","T^2 - V^2","V^2","S^2 - V^2","V^2"]}"#,
    );
    assert_eq!(code(&run(&["check-bundle", &wrong_type], None)), 2);
}

#[test]
fn brauer_on_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    assert_eq!(code(&run(&["--out", &out, "verify-hpt", "--prime", "41"], None)), 0);
    let graph = dir.path().join("graph.json").display().to_string();
    let o = run(&["brauer", &graph], None);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["result"]["order_of_quotient"], serde_json::json!(2), "{doc}");

    let one = write(
        dir.path(),
        "one.json",
        r#"{"components":[{"name":"D","residue_nontrivial":true}],"curves":[],"hypotheses":{"h1_base_vanishing":true,"h2_curves_two_surfaces":true,"h3_points_three_surfaces":true,"h4_factorial":true}}"#,
    );
    let o = run(&["brauer", &one], None);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["result"]["order_of_quotient"], serde_json::json!(1), "{doc}");
}

#[test]
fn check_bundle_on_the_hpt_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    assert_eq!(code(&run(&["--out", &out, "verify-hpt", "--prime", "41"], None)), 0);
    let bundle = dir.path().join("bundle.json").display().to_string();
    let factors = dir.path().join("factors.json").display().to_string();
    let o = run(&["--text", "check-bundle", &bundle, "--factors", &factors], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let o = run(&["check-bundle", &bundle], None);
    assert_eq!(code(&o), 0);
    let text = run(&["--text", "check-bundle", &bundle], None);
    assert!(String::from_utf8_lossy(&text.stdout).contains("note:"));
}

#[test]
fn exhausted_retries_exit_3() {
    let o = run(&["build-example", "--prime", "37", "--seed", "3", "--retries", "1"], None);
    assert_eq!(code(&o), 3);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["attempts"].as_array().is_some_and(|a| !a.is_empty()), "{doc}");
}

#[test]
fn failed_checks_exit_1() {
    // a non-generic draw at a small prime: the checklist runs and reports failures
    let o = run(&["build-example", "--prime", "37", "--seed", "0", "--retries", "1"], None);
    assert_eq!(code(&o), 1);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["report"].is_object(), "{doc}");
}
