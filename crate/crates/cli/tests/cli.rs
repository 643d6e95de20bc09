use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use stare_cli::{parse_case_base, CliError};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/running_example.json")
}

fn stare(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_stare")).args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (stdout, stderr, code) = stare(args);
    assert_eq!(code, 0, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn fixture_text() -> String {
    std::fs::read_to_string(fixture()).unwrap()
}

#[test]
fn decide_on_fixture() {
    let f = fixture();
    let f = f.to_str().unwrap();
    let th = json(&["decide", f, "--case", "s_star"]);
    assert_eq!(th["payload"]["values"], serde_json::json!([0]));
    assert_eq!(th["payload"]["classification"], "Unambiguous");
    assert_eq!(th["payload"]["support"]["0"], serde_json::json!(["s5"]));
    let naive = json(&["decide", f, "--case", "s_star", "--principle", "naive"]);
    assert_eq!(naive["payload"]["values"], serde_json::json!([0, 1]));
    assert_eq!(naive["payload"]["classification"], "Ambiguous");
}

#[test]
fn incuriam_marks() {
    let f = fixture();
    let out = json(&["incuriam", f.to_str().unwrap()]);
    let marks: Vec<(String, bool)> = out["payload"]["marks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| (m["case"].as_str().unwrap().to_string(), m["incuriam"].as_bool().unwrap()))
        .collect();
    let expected = [("s1", false), ("s2", false), ("s3", false), ("s4", true), ("s5", false)];
    assert_eq!(marks, expected.map(|(c, b)| (c.to_string(), b)));
}

#[test]
fn precedents_and_relevance() {
    let f = fixture();
    let f = f.to_str().unwrap();
    let rel = json(&["relevance", f, "--case", "s_star"]);
    assert_eq!(rel["payload"]["relevance"][0]["relevant"], serde_json::json!(["s1", "s4", "s5"]));
    let p = json(&["precedents", f, "--case", "s_star"]);
    assert_eq!(p["payload"]["binding_not_overruled"], serde_json::json!(["s4", "s5"]));
    let s1 = &p["payload"]["precedents"][0];
    assert_eq!(s1["precedent"], "s1");
    assert_eq!(s1["overruled"], true);
}

#[test]
fn explain_dot() {
    let f = fixture();
    let (dot, _, code) = stare(&["--format", "dot", "explain", f.to_str().unwrap(), "--case", "s_star"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"s4\" [label=\"s4 [1@c1, 4]\""));
    assert!(dot.contains("\"s_star\" -> \"s5\" [style=solid];"));
    let (_, err, code) = stare(&["--format", "dot", "incuriam", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("explain"));
}

#[test]
fn text_format() {
    let f = fixture();
    let (out, _, code) = stare(&["--format", "text", "decide", f.to_str().unwrap(), "--case", "s_star"]);
    assert_eq!(code, 0);
    assert!(out.contains("classification: Unambiguous"));
}

#[test]
fn output_is_deterministic() {
    let f = fixture();
    let f = f.to_str().unwrap();
    for args in [
        vec!["relevance", f],
        vec!["explain", f, "--case", "s_star"],
        vec!["incuriam", f],
        vec!["precedents", f, "--case", "s_star"],
    ] {
        assert_eq!(stare(&args).0, stare(&args).0);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"facts\": [").unwrap();
    let (_, err, code) = stare(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error at line 1"));

    let f = fixture();
    let (_, err, code) = stare(&["decide", f.to_str().unwrap(), "--case", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("nope"));

    let (_, _, code) = stare(&["--relevance", "explicit", "decide", f.to_str().unwrap(), "--case", "s_star"]);
    assert_eq!(code, 2);

    let (_, _, code) = stare(&["decide", dir.path().join("missing.json").to_str().unwrap(), "--case", "s"]);
    assert_eq!(code, 2);
}

#[test]
fn validate_reports_issues() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c9.json");
    std::fs::write(&path, fixture_text().replacen("\"court\": \"c0\"", "\"court\": \"c9\"", 1)).unwrap();
    let (stdout, _, code) = stare(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["payload"]["valid"], false);
    let (_, err, code) = stare(&["decide", path.to_str().unwrap(), "--case", "s_star"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown reference `c9`"));
}

#[test]
fn parse_errors() {
    let text = fixture_text().replacen("\"court\": \"c0\"", "\"court\": \"c9\"", 1);
    assert!(matches!(parse_case_base(&text), Err(CliError::UnknownReference(id)) if id == "c9"));
    let empty = r#"{"facts": [], "courts": [{"id": "c0", "parent": null, "self_bound": true}], "cases": []}"#;
    assert!(parse_case_base(empty).unwrap().is_empty());
    assert!(matches!(parse_case_base("[1, 2"), Err(CliError::SyntaxError { line: 1, .. })));
    let two_roots = r#"{"facts": [], "courts": [{"id": "a"}, {"id": "b"}]}"#;
    assert!(matches!(parse_case_base(two_roots), Err(CliError::ValidationFailed(_))));
}

#[test]
fn relevance_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("explicit.json");
    let text = fixture_text().replace(
        "{\"mode\": \"afortiori\"}",
        "{\"mode\": \"explicit\", \"edges\": [[\"s1\", \"s_star\"]]}",
    );
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let explicit = json(&["relevance", p, "--case", "s_star"]);
    assert_eq!(explicit["payload"]["relevance"][0]["relevant"], serde_json::json!(["s1"]));
    let forced = json(&["--relevance", "afortiori", "relevance", p, "--case", "s_star"]);
    assert_eq!(forced["payload"]["relevance"][0]["relevant"], serde_json::json!(["s1", "s4", "s5"]));
}

#[test]
fn check_props_small_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check-props", "--plt", "1", "--dfd", "1", "--courts", "2", "--assessed", "2"];
    let (stdout, stderr, code) = stare(&args);
    assert_eq!(code, 0, "{stderr}");
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["payload"]["verdicts"].as_array().unwrap().len(), 6);

    let dump = dir.path().join("cex");
    let mut args = args.to_vec();
    args.extend(["--property", "prop_unambiguous", "--no-hypotheses", "--dump", dump.to_str().unwrap()]);
    args[8] = "3";
    let (stdout, _, code) = stare(&args);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let row = &v["payload"]["verdicts"][0];
    let focus = row["witnesses"][0].as_str().unwrap();
    let file = dump.join("prop_unambiguous.json");
    let replay = json(&["decide", file.to_str().unwrap(), "--case", focus]);
    assert_eq!(replay["payload"]["classification"], "Ambiguous");

    let (_, err, code) = stare(&["check-props", "--property", "prop9"]);
    assert_eq!(code, 1);
    assert!(err.contains("prop9"));
}
