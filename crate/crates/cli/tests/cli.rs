use std::process::{Command, Output};

use serde_json::Value;

fn singan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singan")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_list_has_every_entry() {
    let o = singan(&["catalog", "list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().count() >= 14, "{out}");
    for key in ["henon", "tsuda", "dp2-late", "antimac"] {
        assert!(out.lines().any(|l| l.starts_with(key)), "{key}");
    }
}

#[test]
fn henon_json() {
    let o = singan(&["analyze", "--catalog", "henon", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "NON_INTEGRABLE");
    let bound: f64 = v["entropy_lower_bound"].as_str().unwrap().parse().unwrap();
    assert!((bound - 2f64.ln()).abs() < 1e-12);
    assert_eq!(v["singular_values"], Value::Array(vec![]));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let a = singan(&["analyze", "--catalog", "tsuda", "--json"]);
    let b = singan(&["analyze", "--catalog", "tsuda", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn late_confinement_text() {
    let o = singan(&["analyze", "--catalog", "dp2-late"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("x = 1: confined {1, ∞, -1, ∞, 1}"), "{out}");
    assert!(out.contains("dominant root: 1.8832"), "{out}");
}

#[test]
fn mapfile_with_several_maps() {
    let dir = std::env::temp_dir().join(format!("singan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.map");
    std::fs::write(
        &path,
        "map \"shift\" { kind: scalar forward: 2*x - y }\nmap \"k2\" { kind: scalar forward: x^2/y }\n",
    )
    .unwrap();
    let o = singan(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["shift", "k2"]);
}

#[test]
fn parse_errors_exit_two_with_a_position() {
    let dir = std::env::temp_dir().join(format!("singan-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.map");
    std::fs::write(&path, "map \"m\" {\n  kind: scalar\n  forward: x +* y\n}\n").unwrap();
    let o = singan(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.map:3:15:"), "{err}");
}

#[test]
fn unknown_catalog_key_exits_two() {
    assert_eq!(singan(&["analyze", "--catalog", "nope"]).status.code(), Some(2));
    assert_eq!(singan(&["catalog", "run-all", "--key", "nope"]).status.code(), Some(2));
    assert_eq!(singan(&["catalog", "run-all", "--only", "tag=NOPE"]).status.code(), Some(2));
}

#[test]
fn run_all_filters_by_key_and_tag() {
    let o = singan(&["catalog", "run-all", "--key", "henon", "--key", "k3", "--only", "tag=PAPER"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    let (summary, rows) = lines.split_last().unwrap();
    assert!(!rows.is_empty());
    for l in rows {
        assert!(l.starts_with("PASS [PAPER] henon:") || l.starts_with("PASS [PAPER] k3:"), "{l}");
    }
    assert!(rows.iter().position(|l| l.contains("k3:")) > rows.iter().position(|l| l.contains("henon:")));
    assert_eq!(*summary, format!("{} passed, 0 failed", rows.len()));
}
