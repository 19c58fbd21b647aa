use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn rimix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rimix")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lorentz_norm_of_an_indicator() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"length": 1, "breakpoints": [0.5, 1], "values": [1, 0]}"#);
    let o = rimix(&["norm", "--space", "Lpq:2,1", "--step", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    // 2·(1/2)^{1/2}
    assert_eq!(stdout(&o).trim(), "1.414213562373");
}

#[test]
fn mixed_norm_of_a_square() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", r#"{"n": 2, "cells_per_axis": 2, "values": [1, 0, 0, 0]}"#);
    let o = rimix(&["mixed-norm", "--X", "L1", "--Y", "Linf", "--grid", s(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "1");
    let o = rimix(&["mixed-norm", "--X", "L1", "--Y", "Linf", "--grid", s(&g), "--axis", "1"]);
    assert_eq!(stdout(&o).trim(), "0.5");
}

#[test]
fn fournier_on_zero_grid() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", r#"{"n": 3, "cells_per_axis": 2, "values": [0,0,0,0,0,0,0,0]}"#);
    let o = rimix(&["fournier", "--grid", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0 0 0");
}

#[test]
fn kfun_prints_csv() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"length": 1, "breakpoints": [0.25, 1], "values": [4, 1]}"#);
    let o = rimix(&["kfun", "--step", s(&f), "--X", "L1", "--t", "0.1,0.5,2"]);
    assert_eq!(o.status.code(), Some(0));
    // K(f,t;L1,L∞) = ∫_0^t f*.
    assert_eq!(stdout(&o), "t,K\n0.1,0.4\n0.5,1.25\n2,1.75\n");
    let o = rimix(&["kfun", "--step", s(&f), "--X", "L1", "--count", "5"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn optimal_range_and_domain() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"length": 1, "breakpoints": [0.25, 1], "values": [1, 0]}"#);
    let o = rimix(&["opt-range", "--X", "L1", "--n", "2", "--step", s(&f)]);
    // ∫ χ_(0,1/4)(t^2) dt = 1/2.
    assert_eq!(stdout(&o).trim(), "0.5");
    let o = rimix(&["opt-domain", "--space", "Lpq:4,1", "--n", "2", "--step", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    let value: f64 = lines.next().unwrap().parse().unwrap();
    assert!((value - 3.0).abs() < 1e-9, "{value}");
    assert!(lines.next().unwrap().starts_with("enclosure "));
    assert!(lines.next().unwrap().starts_with("equivalent "));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"length": 1, "breakpoints": [1], "values": [1]}"#);
    for args in [
        vec!["norm", "--space", "Lpq:0.5,1", "--step", s(&f)],
        vec!["norm", "--space", "Lp:2"],
        vec!["frobnicate"],
        vec!["norm", "--space", "Lp:2", "--step", "/nonexistent/f.json"],
        vec!["kfun", "--X", "L1"],
    ] {
        let o = rimix(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let bad = write(dir.path(), "bad.json", r#"{"length": 1, "breakpoints": [0.5, 0.4], "values": [1, 1]}"#);
    let o = rimix(&["norm", "--space", "L1", "--step", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    assert_eq!(rimix(&["--help"]).status.code(), Some(0));
}

#[test]
fn zero_tolerance_exposes_rounding() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let o = rimix(&["verify", "--tolerance", "0", "--only", "space.substitution", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL space.substitution"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    let ce: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("counterexamples/space.substitution.json")).unwrap())
            .unwrap();
    assert!(ce.is_object() || ce.is_array());
}

#[test]
fn verify_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"seed": 5, "counts": {"cellsets": 20, "geometry_grids": 20, "kfun_grids": 10, "step_fns": 30,
            "interp_grids": 4, "fubini_grids": 10, "axiom_samples": 10}, "dims": [2, 3],
            "grid_sizes": [2, 3, 4, 8], "only": ["step.", "space.", "mixed."]}"#,
    );
    let a = rimix(&["verify", "--config", s(&config), "--format", "json"]);
    let b = rimix(&["verify", "--config", s(&config), "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 5);
    let c = rimix(&["verify", "--config", s(&config), "--seed", "6", "--format", "json"]);
    assert_ne!(a.stdout, c.stdout);
}
