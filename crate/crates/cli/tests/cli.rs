use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anosov-forge"))
        .args(args)
        .env_remove("ANOSOV_FORGE_BITS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path_str(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes_match_fixture_verdicts() {
    for (name, expected) in [
        ("cartan.json", 0),
        ("block_unipotent.json", 1),
        ("identity.json", 1),
        ("symplectic.json", 1),
        ("fibonacci.json", 1),
    ] {
        let o = forge(&["analyze", path_str(&fixture(name))]);
        assert_eq!(code(&o), expected, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn identity_fails_the_anosov_check() {
    let o = forge(&["analyze", path_str(&fixture("identity.json")), "--json", "-"]);
    let v = stdout_json(&o);
    assert_eq!(v["hypotheses"]["anosov_in_every_chamber"]["status"], "false");
    assert_eq!(v["theorem_hypotheses"]["status"], "false");
}

#[test]
fn cartan_report_lists_six_chambers() {
    let o = forge(&["analyze", path_str(&fixture("cartan.json")), "--json", "-"]);
    let v = stdout_json(&o);
    assert_eq!(v["theorem_hypotheses"]["status"], "true");
    assert_eq!(v["arrangement"]["chambers"].as_array().unwrap().len(), 6);
    assert_eq!(v["arrangement"]["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn parse_errors_exit_three_with_location() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\n  \"schema_version\": 1,\n  \"name\": \"x\",\n  \"kind\": \"torus\",\n  \"payload\": {\"dim\": 2, \"rank\": 1, \"generators\": [[[2, 1], [1, 1]]], \"bogus\": 1}\n}\n").unwrap();
    let o = forge(&["analyze", path_str(&bad)]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bogus"), "{err}");

    std::fs::write(&bad, "{\n  \"schema_version\": 1,\n  \"name\": \"x\"\n  \"kind\": \"torus\"\n}\n").unwrap();
    let o = forge(&["analyze", path_str(&bad)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let o = forge(&["analyze", "/nonexistent/file.json"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn non_commuting_input_exits_one() {
    let f = scratch("shears.json");
    std::fs::write(
        &f,
        r#"{"schema_version": 1, "name": "shears", "kind": "torus",
            "payload": {"dim": 2, "rank": 2, "generators": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]}}"#,
    )
    .unwrap();
    let o = forge(&["analyze", path_str(&f), "--json", "-"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["hypotheses"]["commuting"]["status"], "false");
}

#[test]
fn lift_round_trips() {
    let out = scratch("fib-lift.json");
    let audit = scratch("fib-lift-audit.json");
    let o = forge(&[
        "lift",
        path_str(&fixture("fibonacci.json")),
        "--step",
        "2",
        "--out",
        path_str(&out),
        "--json",
        path_str(&audit),
    ]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let lifted: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(lifted["kind"], "graded");
    assert_eq!(lifted["payload"]["grading"], serde_json::json!([2, 1]));
    let again = forge(&["analyze", path_str(&out), "--json", "-"]);
    assert_eq!(String::from_utf8_lossy(&again.stdout), std::fs::read_to_string(&audit).unwrap());

    let o = forge(&["lift", path_str(&fixture("cartan.json")), "--step", "2"]);
    let lifted = stdout_json(&o);
    assert_eq!(lifted["payload"]["grading"], serde_json::json!([3, 3]));

    let o = forge(&["lift", path_str(&fixture("identity.json")), "--step", "2", "--json", path_str(&audit)]);
    assert_eq!(code(&o), 1);
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&audit).unwrap()).unwrap();
    assert_eq!(a["hypotheses"]["anosov_in_every_chamber"]["status"], "false");
}

#[test]
fn chambers_formats() {
    let o = forge(&["chambers", path_str(&fixture("fibonacci.json")), "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["chambers"].as_array().unwrap().len(), 2);

    let o = forge(&["chambers", path_str(&fixture("cartan.json")), "--format", "json"]);
    let v = stdout_json(&o);
    let lines = v["lines"].as_array().unwrap();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l["cos"]["lo"].is_string() && l["sin"]["hi"].is_string()));

    let o = forge(&["chambers", path_str(&fixture("cartan.json")), "--format", "svg"]);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<line ").count(), 3);
    assert_eq!(svg.matches("fill=\"#c0392b\"").count(), 6);

    let rank3 = scratch("rank3.json");
    std::fs::write(
        &rank3,
        r#"{"schema_version": 1, "name": "rank three", "kind": "torus",
            "payload": {"dim": 3, "rank": 3, "generators": [
              [[0, 0, -1], [1, 0, 3], [0, 1, 0]],
              [[-1, 0, -1], [1, -1, 3], [0, 1, -1]],
              [[0, -1, 1], [-1, 3, -4], [1, -1, 3]]]}}"#,
    )
    .unwrap();
    let o = forge(&["chambers", path_str(&rank3), "--format", "svg"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rank 3"));
    let o = forge(&["chambers", path_str(&rank3), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn normal_forms_inputs() {
    let o = forge(&["normal-forms", path_str(&fixture("spectrum.json"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["dimension"], "3");
    let o = forge(&["normal-forms", path_str(&fixture("spectrum.json")), "--convention", "all-j"]);
    assert_eq!(stdout_json(&o)["dimension"], "4");
    let o = forge(&["normal-forms", path_str(&fixture("cartan.json")), "--chamber", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["element"].is_array());
    let o = forge(&["normal-forms", path_str(&fixture("cartan.json")), "--element", "1,-2"]);
    assert_eq!(stdout_json(&o)["element"], serde_json::json!([1, -2]));
}

#[test]
fn precision_flags_and_environment() {
    let f = path_str(&fixture("cartan.json")).to_string();
    let v = stdout_json(&forge(&["analyze", &f, "--json", "-", "--bits", "2048", "--seed", "5"]));
    assert_eq!(v["config"]["precision_cap_bits"], 2048);
    assert_eq!(v["config"]["seed"], 5);
    let o = Command::new(env!("CARGO_BIN_EXE_anosov-forge"))
        .args(["analyze", &f, "--json", "-"])
        .env("ANOSOV_FORGE_BITS", "1024")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&o)["config"]["precision_cap_bits"], 1024);
}

#[test]
fn batch_mode_keeps_input_order() {
    let a = fixture("cartan.json");
    let b = fixture("block_unipotent.json");
    let o = forge(&["analyze", path_str(&a), path_str(&b), "--jobs", "2", "--json", "-"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["theorem_hypotheses"]["status"], "true");
    assert_eq!(arr[1]["hypotheses"]["semisimple"]["status"], "false");
}

#[test]
fn selftest_passes() {
    let o = forge(&["selftest"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{text}");
    assert!(!text.contains("FAIL"));
}
