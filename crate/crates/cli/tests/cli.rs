use std::path::PathBuf;
use std::process::{Command, Output};

use svkin_cli::{AuditRecord, RunSummary};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.toml"))
}

fn svkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svkin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario("dam_break_flat");
    let o = svkin(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "grid.cells=40",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let csv = std::fs::read_to_string(dir.path().join("states.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t (s),x (m),h (m),u (m/s),z (m)"));
    assert!(lines.count() >= 80);

    let summary: RunSummary =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary.cells, 40);
    assert_eq!(summary.violations, 0);
    assert!(summary.min_h >= 0.0);

    let audit = std::fs::read_to_string(dir.path().join("audit.jsonl")).unwrap();
    let records: Vec<AuditRecord> = audit
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), summary.audited_steps);
    assert_eq!(records.last().unwrap().step, summary.steps);
}

#[test]
fn dropping_the_error_term_flags_the_jump_cell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario("moving_false_equilibrium");
    let args = [
        "run",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ];

    let o = svkin(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = svkin(&[&args[..], &["--set", "audit.error_term=false"]].concat());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let audit = std::fs::read_to_string(dir.path().join("audit.jsonl")).unwrap();
    let first: AuditRecord = serde_json::from_str(audit.lines().next().unwrap()).unwrap();
    assert_eq!(first.flagged_cells, vec![1]);
    assert!(first.max_d > 0.0);
}

#[test]
fn refine_rejects_discontinuous_topography() {
    let cfg = scenario("step_table_periodic");
    let o = svkin(&["refine", cfg.to_str().unwrap(), "--levels", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Lipschitz"), "{}", stderr(&o));
}

#[test]
fn refine_writes_study() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario("dam_break_flat");
    let o = svkin(&[
        "refine",
        cfg.to_str().unwrap(),
        "--levels",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "grid.cells=20",
        "--set",
        "time.t_end=0.05",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let study: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("refinement.json")).unwrap())
            .unwrap();
    let cells: Vec<u64> = study["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["cells"].as_u64().unwrap())
        .collect();
    assert_eq!(cells, vec![20, 40, 80]);
}

#[test]
fn counterexample_scan() {
    let o = svkin(&["counterexample", "--sigma-grid", "0.01,0.1,0.2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: Vec<serde_json::Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["d"].as_f64().unwrap() > 0.0));
}

#[test]
fn counterexample_rejects_descending_topography() {
    let o = svkin(&["counterexample", "--z-l", "1", "--z-r", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_config_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("dam_break_flat"))
        .unwrap()
        .replacen("cells = ", "cells = \"many\" # ", 1);
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let o = svkin(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.toml") && err.contains("line"), "{err}");

    let cfg = scenario("dam_break_flat");
    let o = svkin(&["run", cfg.to_str().unwrap(), "--set", "time.t_end=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("time.t_end"), "{}", stderr(&o));

    let o = svkin(&["run", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(2));
}
