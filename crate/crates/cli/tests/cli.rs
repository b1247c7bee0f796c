use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randgroups")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_then_validate_a_construction() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("p.json");
    let diag = dir.path().join("d.json");
    let o = run(&["sample", "--m", "2", "--ell", "20", "--density", "0.25", "--seed", "3", "--out", path(&pres)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&pres).unwrap();
    for field in ["\"m\"", "\"ell\"", "\"density\"", "\"seed\"", "\"relators\""] {
        assert!(text.contains(field), "missing {field}");
    }
    let o = run(&["construct", "two-face", "--presentation", path(&pres), "--out", path(&diag)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"kind\": \"two-face\""));
    let o = run(&["diagram", "validate", "--presentation", path(&pres), "--diagram", path(&diag)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
    let o = run(&["diagram", "check", "--presentation", path(&pres), "--diagram", path(&diag)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn counterexample_fails_the_greendlinger_check() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("p.json");
    let diag = dir.path().join("d.json");
    run(&["sample", "--m", "2", "--ell", "40", "--density", "0.25", "--seed", "3", "--out", path(&pres)]);
    let o = run(&["construct", "counterexample", "--presentation", path(&pres), "--out", path(&diag)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"no_dehn_face\": true"));
    let o = run(&["diagram", "check", "--presentation", path(&pres), "--diagram", path(&diag)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("greendlinger: false"));
}

#[test]
fn missing_construction_is_a_check_failure() {
    let o = run(&["construct", "two-face", "--m", "2", "--ell", "20", "--density", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(run(&["sample", "--density", "2"]).status.code(), Some(1));
    assert_eq!(run(&["diagram", "validate", "--presentation", "/nonexistent", "--diagram", "/nonexistent"]).status.code(), Some(1));
    assert_eq!(run(&["experiment", "greendlinger", "--faces", "1", "--trials", "1"]).status.code(), Some(1));
}

#[test]
fn cancellation_and_dehn() {
    let o = run(&["cancellation", "--m", "2", "--ell", "20", "--density", "0.3", "--lambda", "1/6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["cancellation", "--m", "2", "--ell", "20", "--density", "0.3", "--lambda", "1/1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["dehn", "--m", "2", "--ell", "8", "--density", "0", "--word", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("input,a\n"));
}

#[test]
fn pieces_csv() {
    let o = run(&["pieces", "--m", "2", "--ell", "10", "--density", "0.2", "--seed", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("length,count\n"));
}

#[test]
fn bounds_json() {
    let o = run(&["bounds", "--c", "0.5", "--ell", "100", "--density", "0.25", "--epsilon", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta_bound"], 4800.0);
    assert_eq!(v["min_k"], 96000.0);
}

#[test]
fn experiment_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path, workers: &str| {
        run(&["experiment", "isoperimetry", "--ell", "20", "--density", "0.05,0.1", "--trials", "4", "--face-grid", "1,3", "--workers", workers, "--seed", "5", "--out", path(out)])
    };
    let oa = args(&a, "1");
    let ob = args(&b, "4");
    assert!(oa.status.success());
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let trials = std::fs::read_to_string(&a).unwrap();
    assert!(trials.starts_with("d,faces_target,trial,seed,faces,boundary,ratio,threshold,holds\n"));
    assert_eq!(trials.lines().count(), 1 + 2 * 2 * 4);
    let o = run(&["experiment", "pieces", "--ell", "12", "--trials", "0"]);
    assert_eq!(stdout(&o), "d,trials,mean,min,q25,median,q75,max\n");
}
