//! End-to-end checks of the command-line interface: subcommands, file and
//! inline input, exit codes, and byte-identical machine output.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pscaffold"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const RUNNING: &[&str] = &[
    "--p",
    "3",
    "--kind",
    "cyclic",
    "--beta1",
    "[[-1,1]]",
    "--beta2",
    "[[-7,1]]",
];

#[test]
fn analyze_running_example() {
    let out = run(&[&["analyze"], RUNNING].concat());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("b1 = 1, b2 = 19"));
    assert!(text.contains("u2* = 7"));
    assert!(text.contains("mu = t^-2"));
    assert!(text.contains("scaffold hypotheses hold: true"));
}

#[test]
fn analyze_machine_output_is_json_and_deterministic() {
    let args = [&["analyze"], RUNNING, &["--machine"]].concat();
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["extension"]["b2"], 19);
    assert_eq!(v["extension"]["mu"], serde_json::json!([[-2, 1]]));
    assert_eq!(v["extension"]["beta2"], serde_json::json!([[-7, 1]]));
}

#[test]
fn analyze_from_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("pscaffold_cli_test_ext.json");
    std::fs::write(
        &path,
        r#"{"p": 3, "kind": "abelian", "beta1": [[-1, 1]], "beta2": [[-7, 1]]}"#,
    )
    .unwrap();
    let out = run(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("kind = abelian"));
    assert!(stdout(&out).contains("b2 = 19"));
}

#[test]
fn analyze_unramified_input_exits_2() {
    let out = run(&[
        "analyze", "--p", "3", "--kind", "cyclic", "--beta1", "[[2,1]]", "--beta2", "[[-7,1]]",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("not fully ramified"), "stderr: {err}");
}

#[test]
fn parse_error_exits_2() {
    let out = run(&[
        "analyze", "--p", "3", "--kind", "cyclic", "--beta1", "oops", "--beta2", "[[-7,1]]",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scaffold_passes_and_is_deterministic() {
    let args = [
        &["scaffold"],
        RUNNING,
        &["--trials", "10", "--seed", "4", "--machine"],
    ]
    .concat();
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["report"]["residues_complete"], true);
}

#[test]
fn scaffold_refuses_hypothesis_failures() {
    let out = run(&[
        "scaffold", "--p", "3", "--kind", "cyclic", "--beta1", "[[-1,1]]", "--beta2", "[[-2,1]]",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn order_reports_free_with_generator() {
    let out = run(&[&["order"], RUNNING].concat());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("FREE, r(b)=1, generator valuation 1"));
    assert!(text.contains("generator certificate: PASS"));
    assert!(text.contains("w = [0, 0, 0, 2, 2, 2, 4, 4, 5]"));
}

#[test]
fn order_not_applicable_without_hypotheses() {
    let out = run(&[
        "order", "--p", "3", "--kind", "cyclic", "--beta1", "[[-1,1]]", "--beta2", "[[-2,1]]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("not applicable"));
}

#[test]
fn survey_emits_table_with_agreement() {
    let out = run(&[
        "survey", "--p", "3", "--b1-max", "4", "--m-max", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p\tb1\tb2\tr\tfree_by_r\tfree_by_w\tagree"
    );
    assert!(text.lines().skip(1).all(|l| l.ends_with("true")));
}

#[test]
fn identities_all_certify() {
    let out = run(&["identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(", 0 failed"));
    let machine = run(&["identities", "--machine"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&machine)).unwrap();
    assert_eq!(v["status"], "ok");
}
