use std::path::Path;
use std::process::{Command, Output};

fn openqec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_openqec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn quick(dir: &Path) -> Vec<String> {
    vec![
        "--set".into(),
        format!("output={}", dir.join("run").display()),
        "--set".into(),
        "dt=0.5".into(),
        "--set".into(),
        "kappa=0.1".into(),
        "--set".into(),
        "t_points=3".into(),
    ]
}

fn run_with(cmd: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec![cmd.into()];
    args.extend(quick(dir));
    for e in extra {
        args.push(e.to_string());
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    openqec(&refs)
}

#[test]
fn simulate_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with("simulate", dir.path(), &["--set", "cycles=[1,2]"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert!(csv.contains("\nt,F_no_qec,F_qec_n1,F_qec_n2\n"), "{csv}");
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["cycles"], serde_json::json!([1, 2]));
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_with("simulate", dir.path(), &[]).status.success());
    let first = std::fs::read(dir.path().join("run.csv")).unwrap();
    assert!(run_with("simulate", dir.path(), &[]).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("run.csv")).unwrap());
}

#[test]
fn config_file_and_overrides_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"temperature": 10.0, "initial_state": "plus"}"#).unwrap();
    let out = run_with("simulate", dir.path(), &["--config", cfg.to_str().unwrap(), "--set", "dt=0.02"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["temperature"], 10.0);
    assert_eq!(meta["config"]["initial_state"], "plus");
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with("simulate", dir.path(), &["--set", "p=1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p"));
    assert_eq!(run_with("simulate", dir.path(), &["--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(openqec(&["simulate", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(openqec(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with("simulate", dir.path(), &["--set", "code=toric_822"]);
    assert_eq!(out.status.code(), Some(2), "invalid code/state pairing is a configuration error");
    let out = run_with("sweep", dir.path(), &["--set", r#"sweep.code=["five_qubit","toric_822"]"#]);
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert!(csv.contains("toric_822"));
}

#[test]
fn validate_codes_passes() {
    let out = openqec(&["validate-codes"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["five_qubit", "steane", "toric_822"] {
        assert!(text.contains(name));
    }
}

#[test]
fn critical_time_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with(
        "critical-time",
        dir.path(),
        &["--set", "critical_p=[0.9]", "--set", "crossover.coarse_points=10", "--set", "dt=0.25"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert!(csv.contains("p,cycles,kappa_t_c,outcome"));
}
