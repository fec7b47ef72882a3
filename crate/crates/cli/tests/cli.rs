use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn nilmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilmix")).args(args).output().expect("binary runs")
}

fn config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    nilmix(&args)
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn analyze_heisenberg_cat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "a.json", r#"{"system": "heisenberg-cat"}"#);
    let out = dir.path().join("out");
    let o = run("analyze", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    let c = &r["result"]["generators"][0]["classification"];
    assert_eq!(c["ergodic"], Value::Bool(true));
    assert_eq!(c["type"], "rational");
    assert_eq!(c["n2"], serde_json::json!([[0, 0, 1]]));
    assert!(out.join("lyapunov.csv").exists());
}

#[test]
fn rates_catmap_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "r.json", r#"{"system": "catmap", "s": [0.5]}"#);
    let out = dir.path().join("out");
    let o = run("rates", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0));
    let g = report(&out)["result"]["holder"][0]["gamma"].as_f64().unwrap();
    assert!((g - 0.010025).abs() < 1e-6, "{g}");
    let csv = fs::read_to_string(out.join("gamma.csv")).unwrap();
    assert!(csv.starts_with("s,gamma,rho0,s0\n0.5,0.0100252"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "bad.json", r#"{"system": "catmap", "observables": ["#);
    let o = run("correlate", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn unknown_fields_and_systems_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (i, body) in [
        r#"{"system": "catmap", "s": [0.5], "typo": 1}"#,
        r#"{"system": "no-such-system"}"#,
        r#"{"system": {"generators": [[[1, 2], [3, 4]]]}}"#,
    ]
    .iter()
    .enumerate()
    {
        let cfg = config(dir.path(), &format!("c{i}.json"), body);
        let o = run("rates", &cfg, &dir.path().join("out"), &[]);
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let o = nilmix(&["rates", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn computation_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "ne.json", r#"{"system": {"generators": [[[1, 1], [0, 1]]]}}"#);
    let o = run("rates", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NotErgodic");
}

fn files(out: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(out)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let obs = r#"{"dim": 2, "coeffs": [{"z": [1, 0], "re": 0.5}, {"z": [-1, 0], "re": 0.5}, {"z": [1, 1], "re": 0.25, "im": 0.1}]}"#;
    let cases = [
        ("density", format!(r#"{{"system": "cubic-rank2", "radius": [10, 20], "samples": 20000}}"#)),
        ("correlate", format!(r#"{{"observables": [{obs}, {obs}], "times": {{"range": {{"from": 0, "to": 4, "pattern": [0, 1]}}}}}}"#)),
        ("solve", format!(r#"{{"observable": {obs}, "r": 0.75}}"#)),
        ("certify", r#"{"system": "catmap", "radius": 200}"#.to_string()),
    ];
    for (cmd, body) in cases {
        let cfg = config(dir.path(), &format!("{cmd}.json"), &body);
        let (a, b) = (dir.path().join(format!("{cmd}-a")), dir.path().join(format!("{cmd}-b")));
        assert_eq!(run(cmd, &cfg, &a, &["--seed", "7"]).status.code(), Some(0), "{cmd}");
        assert_eq!(run(cmd, &cfg, &b, &["--seed", "7"]).status.code(), Some(0), "{cmd}");
        assert_eq!(files(&a), files(&b), "{cmd}");
        let r = report(&a);
        assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(r["settings"]["seed"], 7);
        assert!(r["config"].is_object());
        assert!(!files(&a).iter().any(|(n, _)| n.ends_with(".tmp")));
    }
}

#[test]
fn defaults_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "t.json", r#"{"profile": {"constant": 1.0}, "r": [0.25], "h": [1e-6]}"#);
    let out = dir.path().join("out");
    assert_eq!(run("threshold", &cfg, &out, &[]).status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["cells"], 256);
    assert_eq!(r["config"]["tolerance"], 1e-3);
    let i = r["result"]["sweep"][0]["integral"].as_f64().unwrap();
    assert!((i - 4.0).abs() < 0.04);
}

#[test]
fn counterexample_demos() {
    let dir = tempfile::tempdir().unwrap();
    let cos = r#"{"dim": 2, "coeffs": [{"z": [1, 0], "re": 0.5}, {"z": [-1, 0], "re": 0.5}]}"#;
    let cfg = config(
        dir.path(),
        "m.json",
        &format!(r#"{{"demo": "maxgap", "f1": {cos}, "f2": {cos}, "n": 2, "from": 30, "to": 30}}"#),
    );
    let out = dir.path().join("m");
    assert_eq!(run("counterexample", &cfg, &out, &[]).status.code(), Some(0));
    let csv = fs::read_to_string(out.join("series.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "30,30,60,60,0,30,0.25,0,0.25");
    let cfg = config(
        dir.path(),
        "u.json",
        r#"{"demo": "no-uniform-bound", "g": {"dim": 2, "coeffs": [{"z": [1, 0], "re": 1}, {"z": [0, 1], "re": 2}]}, "from": 1, "to": 40}"#,
    );
    let out = dir.path().join("u");
    assert_eq!(run("counterexample", &cfg, &out, &[]).status.code(), Some(0));
    assert_eq!(report(&out)["result"]["constant"], Value::Bool(true));
}
