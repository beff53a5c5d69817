//! End-to-end checks of the command-line interface: exit codes, report
//! shapes, and byte-level determinism across worker counts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_resl")
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/r36.json")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn validate_fixture_succeeds() {
    let path = fixture();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("mtl: false"));
    assert!(text.contains("pass imp.order"));
}

#[test]
fn validate_missing_file_exits_2() {
    let out = run(&["validate", "/nonexistent/algebra.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_broken_residuation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture()).unwrap();
    // corrupt one implication entry: a -> b becomes 1
    let broken = text.replacen("[0, 5, 2, 3, 3, 5]", "[0, 5, 5, 3, 3, 5]", 1);
    assert_ne!(text, broken);
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("residuation") || err.contains("lattice"), "{err}");
}

#[test]
fn states_census_has_six_type_i_rows() {
    let path = fixture();
    let out = run(&["states", path.to_str().unwrap(), "--class", "type1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7, "{text}");
    assert!(lines[1].starts_with("s1,0,a,0,1,a,1"));
    assert!(lines[6].starts_with("s6,0,1,1,0,0,1"));
}

#[test]
fn states_census_riecan_has_twelve_rows() {
    let path = fixture();
    let out = run(&["states", path.to_str().unwrap(), "--class", "riecan", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 13);
}

#[test]
fn states_census_type3_rows() {
    let path = fixture();
    let out = run(&["states", path.to_str().unwrap(), "--class", "type3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    // the four type II states are all type I as well
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn unknown_class_exits_2() {
    let path = fixture();
    let out = run(&["states", path.to_str().unwrap(), "--class", "type9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quotient_by_named_filter() {
    let path = fixture();
    let out = run(&["quotient", path.to_str().unwrap(), "--filter", "a,b,1"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("classes: 2"), "{text}");
    assert!(text.contains("class 0: {0 c d}"), "{text}");
    assert!(text.contains("class 1: {a b 1}"), "{text}");
}

#[test]
fn quotient_rejects_non_filter() {
    let path = fixture();
    let out = run(&["quotient", path.to_str().unwrap(), "--filter", "b,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn completion_of_census_row_s6() {
    let path = fixture();
    let out = run(&["completion", path.to_str().unwrap(), "--state", "s6"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("completed carrier: 2 elements"), "{text}");
    assert!(text.contains("pass injective_iff_faithful"), "{text}");
}

#[test]
fn completion_of_explicit_table() {
    let path = fixture();
    let out = run(&["completion", path.to_str().unwrap(), "--state", "0,1,1,0,0,1"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("completed carrier: 2 elements"));
}

#[test]
fn scan_small_catalog() {
    let out = run(&["scan", "--problem", "type2-subset-type1", "--max-order", "3"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("0 findings"), "{text}");
    assert!(text.contains("evidence"), "{text}");
}

#[test]
fn catalog_command_writes_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "catalog",
        "--max-order",
        "3",
        "--dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("index.json").exists());
    assert!(stdout(&out).contains("order 3: 2 algebras"));
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let path = fixture();
    let args_sets: Vec<Vec<&str>> = vec![
        vec!["states", path.to_str().unwrap(), "--class", "riecan", "--format", "csv"],
        vec!["scan", "--problem", "type3-join", "--max-order", "3", "--format", "csv"],
    ];
    for args in args_sets {
        let mut outputs = Vec::new();
        for jobs in ["1", "4"] {
            let mut full = args.clone();
            full.extend(["--jobs", jobs, "--seed", "7"]);
            let out = run(&full);
            assert_eq!(out.status.code(), Some(0), "{out:?}");
            outputs.push(stdout(&out));
        }
        assert_eq!(outputs[0], outputs[1], "output differs across worker counts");
    }
}
