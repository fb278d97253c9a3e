//! Black-box tests of the command-line tool: exit codes, canonical
//! output, and the structure-groupoid pipeline identity.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn braidq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidq")).args(args).output().expect("spawn braidq")
}

#[test]
fn exit_codes() {
    assert_eq!(braidq(&["validate", &fixture("flip-l2.json")]).status.code(), Some(0));
    let broken = braidq(&["validate", &fixture("broken-solution.json")]);
    assert_eq!(broken.status.code(), Some(1));
    // violations are machine-readable JSON on stdout
    let v: serde_json::Value = serde_json::from_slice(&broken.stdout).unwrap();
    assert!(v.get("rule").is_some() && v.get("witness").is_some());
    let bad = braidq(&["validate", &fixture("bad-syntax.json")]);
    assert_eq!(bad.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains("line") && msg.contains("column"), "no position in: {msg}");
    assert_eq!(braidq(&["validate", "/no/such/file.json"]).status.code(), Some(2));
    // wrong kind for a command is an input error
    assert_eq!(braidq(&["derive-rack", &fixture("l2.json")]).status.code(), Some(2));
}

#[test]
fn pipeline_identity_through_structure_groupoid() {
    // canonicalize the input solution document
    let text = std::fs::read_to_string(fixture("flip-l2.json")).unwrap();
    let input = braidq::doc::from_json(&text).unwrap();
    let canonical = braidq::doc::to_json(&input);

    let out = braidq(&["structure-groupoid", &fixture("flip-l2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let emitted = braidq::doc::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let braidq::doc::Body::StructuralPair(sp) = emitted.body else {
        panic!("expected a structural-pair document")
    };
    // the solution reconstructed from the pair is the canonical input,
    // byte for byte
    let reconstructed =
        braidq::doc::to_json(&braidq::doc::wrap(braidq::doc::Body::Solution(sp.solution)));
    assert_eq!(reconstructed, canonical);
}

#[test]
fn emitted_documents_revalidate() {
    for cmd in ["derive-rack", "linearize", "facemodel", "structure-groupoid"] {
        let out = braidq(&[cmd, &fixture("flip-l2.json")]);
        assert_eq!(out.status.code(), Some(0), "{cmd} failed");
        let d = braidq::doc::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
        braidq::doc::validate(&d).unwrap();
    }
    let report = braidq(&["check", &fixture("z3.json")]);
    assert_eq!(report.status.code(), Some(0));
}

#[test]
fn cocycle_twist_changes_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let qfile = dir.path().join("q.json");
    std::fs::write(&qfile, r#"[["a", "b", "2/3"]]"#).unwrap();
    let plain = braidq(&["linearize", &fixture("flip-l2.json")]);
    let twisted =
        braidq(&["linearize", &fixture("flip-l2.json"), "--cocycle", qfile.to_str().unwrap()]);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(twisted.status.code(), Some(0));
    assert_ne!(plain.stdout, twisted.stdout);
    let text = String::from_utf8(twisted.stdout).unwrap();
    assert!(text.contains("2/3"));
    // a weight on a non-composable pair is an input error
    std::fs::write(&qfile, r#"[["a", "missing", "1/1"]]"#).unwrap();
    let bad = braidq(&["linearize", &fixture("flip-l2.json"), "--cocycle", qfile.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn global_flags_are_accepted() {
    let out = braidq(&[
        "classify",
        &fixture("l2.json"),
        "--seed",
        "42",
        "--budget",
        "100000",
        "--nmax",
        "2",
        "--assert-level",
        "release",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 4);
    assert_eq!(v["classes"].as_array().unwrap().len(), v["representatives"].as_array().unwrap().len());
}
