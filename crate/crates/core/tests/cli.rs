//! End-to-end runs of the `sslab` binary on the fixtures and on scratch documents.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use sslab::document::{execute, parse_document, render_report, Format, Report, Value};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn sslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sslab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn scratch(text: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("doc.sslab");
    fs::write(&path, text).expect("write document");
    (dir, path)
}

#[test]
fn every_fixture_parses_and_executes_cleanly() {
    for entry in fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let out = sslab(&["eval", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}: {}{}", path.display(), stdout(&out), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn supnonrad_fixture_answers() {
    let out = sslab(&["eval", "--json", fixture("supnonrad.sslab").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_str(&stdout(&out)).unwrap();
    let spectral = report.get("spectral").unwrap().answer().unwrap();
    assert_eq!(spectral.value, Value::Bool(false));
    assert!(spectral.witness.as_deref().is_some_and(|w| w.starts_with("cyl")), "{spectral:?}");
    assert_eq!(report.get("q").unwrap().answer().unwrap().value, Value::Set("generic".into()));
    assert_eq!(report.get("clopen").unwrap().answer().unwrap().value, Value::Bool(false));
    assert_eq!(report.get("finite").unwrap().answer().unwrap().value, Value::Bool(true));
    assert_eq!(report.get("radical").unwrap().answer().unwrap().value, Value::Bool(true));
}

#[test]
fn w2_fixture_rank_is_three() {
    let text = fs::read_to_string(fixture("w2.sslab")).unwrap();
    let report = execute(&parse_document(&text).unwrap());
    assert_eq!(report.get("r").unwrap().answer().unwrap().value, Value::Rank(Some(3)));
    assert_eq!(report.get("rl").unwrap().answer().unwrap().value, Value::Rank(Some(2)));
    assert_eq!(report.get("js").unwrap().answer().unwrap().value, Value::Bool(true));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let path = fixture("w2.sslab");
    let a = sslab(&["eval", "--json", path.to_str().unwrap()]);
    let b = sslab(&["eval", "--json", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dot_output_for_v3() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v3.dot");
    let out = sslab(&["eval", fixture("v3.sslab").to_str().unwrap(), "--dot", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = fs::read_to_string(out_path).unwrap();
    assert!(dot.starts_with("digraph \"lat\" {"));
    assert_eq!(dot.matches("[label=").count(), 7);
    assert_eq!(dot.matches(" -> ").count(), 8);
}

#[test]
fn exit_codes_distinguish_parse_and_query_failures() {
    let (_d, bad) = scratch("space V = poset {o < p}\nquery m = member(X, zero)\n");
    let out = sslab(&["eval", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":2:18: unknown name `X`"), "{err}");

    let (_d, failing) = scratch("space C = cantor\nprufer D on C {idempotent: all}\nquery e = enumerate(D)\nquery ok = cb-rank(C.max)\n");
    let out = sslab(&["eval", failing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("e = enumerate(D): error at 3:7"), "{text}");
    assert!(text.contains("ok = cb-rank(C.max): not-scattered"), "{text}");

    let out = sslab(&["eval", "/nonexistent/doc.sslab"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_without_enumeration_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = sslab(&["eval", fixture("w2.sslab").to_str().unwrap(), "--dot", dir.path().join("x.dot").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumerate"));
}

#[test]
fn empty_document_renders_empty_reports() {
    let (_d, empty) = scratch("# nothing here\n");
    let out = sslab(&["eval", empty.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "");
    let out = sslab(&["eval", "--json", empty.to_str().unwrap()]);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&stdout(&out)).unwrap(), serde_json::json!({"queries": []}));
    let report = execute(&parse_document("").unwrap());
    assert_eq!(render_report(&report, Format::Dot).unwrap(), "digraph sslab {\n}\n");
}

#[test]
fn analyze_and_enumerate() {
    let out = sslab(&["analyze", fixture("supnonrad.sslab").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("analysis R: radical;") && text.contains("spectral=false"), "{text}");

    let out = sslab(&["enumerate", fixture("v3.sslab").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(": 7 pairs"), "{text}");
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with('[')).count(), 7);
}

#[test]
fn verify_suites_run_from_the_command_line() {
    let out = sslab(&["verify", "--suite", "lattice", "--poset-size", "3", "--seed", "7"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("[lattice] PASS"));
    let out = sslab(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2), "clap rejects unknown suites");
}

#[test]
fn max_atoms_override_is_honoured() {
    // with a zero cap the fixpoint iteration for the punctured supremum gives up
    let out = Command::new(env!("CARGO_BIN_EXE_sslab"))
        .args(["eval", fixture("supnonrad.sslab").to_str().unwrap()])
        .env("SSLAB_MAX_ATOMS", "0")
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{text}");
    assert!(text.contains("cap"), "{text}");
}
