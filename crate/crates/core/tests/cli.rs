use std::io::Write;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use proptest::prelude::*;
use serde_json::Value;

use tdw_core::parse::{parse_polynomial, render, VarDecl};
use tdw_core::poly::MonomialOrder;

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/acceptance.jsonl");

fn tdw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdw")).args(args).env_remove("TDW_MAX_DOUBLINGS").output().expect("run tdw")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn schema() -> JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    JSONSchema::compile(&serde_json::from_str(text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let schema = schema();
    let msgs: Vec<String> = match schema.validate(v) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}\n{v:#}");
}

#[test]
fn exit_code_zero_on_equal_verdicts() {
    for cmd in ["milnor", "koszul", "twisted", "check-kb", "check-sum"] {
        let o = tdw(&[cmd, "-f", "x^3+y^4", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
        assert_valid(&json(&o));
    }
    let o = tdw(&["check-log", "-f", "x+y^2", "--vars", "x,y", "--log", "x", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_valid(&json(&o));
}

#[test]
fn exit_code_two_on_input_errors() {
    for args in [
        &["milnor", "-f", "x^^2"][..],
        &["milnor", "-f", "x^2", "--log", "z"],
        &["milnor", "-f", "x^-1"],
        &["check-kb", "-f", "5"],
        &["check-log", "-f", "x*y", "--vars", "x,y", "--log", "x"],
        &["milnor", "-f", "x*y^2"],
    ] {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = tdw(&a);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        let v = json(&o);
        assert_valid(&v);
        assert_eq!(v["error"]["exit_code"], 2);
    }
}

#[test]
fn exit_code_three_on_instability() {
    let o = tdw(&["twisted", "-f", "x", "--d0", "1", "--max-doublings", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert_valid(&json(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_tdw"))
        .args(["check-kb", "-f", "x^3+y^5", "--d0", "1"])
        .env("TDW_MAX_DOUBLINGS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("unstable"));
}

#[test]
fn corpus_fails_iff_a_member_fails() {
    let o = tdw(&["corpus", CORPUS, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid(&v);
    assert_eq!(v["failed"], 0);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, r#"{{"name": "ok", "f": "x^3+y^3", "expected": {{"milnor": 4, "provenance": "hand count"}}}}"#).unwrap();
    writeln!(bad, r#"{{"name": "wrong", "f": "x^2+y^3", "expected": {{"milnor": 3, "provenance": "deliberately wrong"}}}}"#).unwrap();
    let o = tdw(&["corpus", bad.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_valid(&v);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(1), Some(1)));
    assert_eq!(v["members"][1]["name"], "wrong");
    assert_eq!(v["members"][1]["passed"], false);

    let mut unsourced = tempfile::NamedTempFile::new().unwrap();
    writeln!(unsourced, r#"{{"name": "x", "f": "x^2", "expected": {{"milnor": 1}}}}"#).unwrap();
    assert_eq!(tdw(&["corpus", unsourced.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn mismatch_exits_one() {
    // two-component divisor: the per-component pole level disagrees with log-Koszul
    let o = tdw(&["check-quasi-iso", "-f", "x+y", "--vars", "x,y", "--log", "x,y", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let v = json(&o);
    assert_valid(&v);
    assert_eq!(v["verdict"]["equal"], false);
    assert_eq!(v["verdict"]["right"][2], serde_json::json!([0, 0, 1]));
}

#[test]
fn reports_are_deterministic_and_ordered() {
    let args = ["check-quasi-iso", "-f", "x+y^2", "--vars", "x,y", "--log", "x", "--format", "json"];
    let (a, b) = (tdw(&args), tdw(&args));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_valid(&v);
    let raw = stdout(&a);
    let at: Vec<usize> = ["command", "input", "verdict", "evidence", "timing_ms"]
        .iter()
        .map(|k| raw.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{raw}");
    assert!(v["timing_ms"].is_null());
    let timed = json(&tdw(&["milnor", "-f", "x^3", "--format", "json", "--timing"]));
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = tdw(&["check-kb", "-f", "x^3+x*y^3", "--format", "json", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid(&v);
    assert_eq!(v["verdict"]["left"], serde_json::json!([0, 0, 7]));

    let text = stdout(&tdw(&["check-kb", "-f", "x^3+x*y^3"]));
    assert!(text.contains("KB: [0,0,7] vs [0,0,7]  equal  certified"), "{text}");
}

#[test]
fn single_dash_long_flags() {
    let o = tdw(&["check-log", "-f", "x+y^2", "-vars", "x,y", "-log", "x", "-format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["input"]["divisor"], serde_json::json!(["x"]));
}

#[test]
fn seeded_corpus_runs_are_reproducible() {
    let a = tdw(&["corpus", CORPUS, "--format", "json", "--seed", "3"]);
    let b = tdw(&["corpus", CORPUS, "--format", "json", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

fn expression() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (1u32..20).prop_map(|c| c.to_string()),
        (1u32..9, 2u32..9).prop_map(|(a, b)| format!("{a}/{b}")),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(str::to_string),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})+({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rendered_expressions_reparse(text in expression()) {
        let decl = VarDecl::new(&["x", "y", "z"], &["z"]).unwrap();
        let p = parse_polynomial(&text, &decl).unwrap();
        let names = decl.names().to_vec();
        let again = parse_polynomial(&render(&p, &names, &MonomialOrder::DegRevLex), &decl).unwrap();
        prop_assert_eq!(again, p);
    }
}
