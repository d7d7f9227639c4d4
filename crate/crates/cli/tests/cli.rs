use std::io::Write;
use std::process::{Command, Output, Stdio};

use monpres_cli::{AnalysisReport, CsvRow, CSV_SCHEMA};

const NORMAL: &str = "u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5";
const NOT_NORMAL: &str = "u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2";

fn monpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monpres")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_normal_example() {
    let o = monpres(&["analyze", NORMAL]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict:    NormalPositive"), "{text}");
    assert!(text.contains("class group: Z x Z/2"), "{text}");
    assert!(text.contains("u4: P(1,2,4)^3 * P(3,2,4)"), "{text}");
}

#[test]
fn not_normal_is_still_success() {
    let o = monpres(&["analyze", "--json", NOT_NORMAL]);
    assert_eq!(o.status.code(), Some(0));
    let r: AnalysisReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.verdict.status.to_string(), "NotNormal");
    assert_eq!(r.verdict.failed_condition.unwrap().tag(), "3d");
    assert!(r.class_group.is_none());
}

#[test]
fn json_round_trips() {
    let o = monpres(&["verify", "--json", "--degree-bound", "5", NORMAL]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let r: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.class_group.as_ref().unwrap().group, "Z x Z/2");
    let again: AnalysisReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "gens: a b\nrel: a = = b\n").unwrap();
    let o = monpres(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(monpres(&["analyze", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monpres"))
        .args(["analyze", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"# quadric cone\ngens: x y z\nrel: x y = z^2\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class group: Z/2"));
}

#[test]
fn verify_quadric_with_all_oracles() {
    let o = monpres(&["verify", "--oracle", "all", "u1 u2 u3 | u1 u2 = u3^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("formula Z/2, divisor matrix Z/2, facet valuations Z/2"));
}

#[test]
fn verify_prints_cancellativity_witness() {
    let o = monpres(&["verify", "--oracle", "cancel", "--degree-bound", "2", "a b | a^2 = a b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("a * a = a * b but a != b"), "{text}");
    assert!(text.contains("NotCancellative"), "{text}");
}

#[test]
fn rank_seven_is_a_resource_limit() {
    let o = monpres(&["verify", "--oracle", "normal", "g1 g2 g3 g4 g5 g6 g7"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("exceeds the supported maximum"));
}

#[test]
fn unknown_oracle_is_an_input_error() {
    assert_eq!(monpres(&["verify", "--oracle", "magic", NORMAL]).status.code(), Some(2));
}

fn read_rows(csv_text: &str) -> Vec<CsvRow> {
    let (first, rest) = csv_text.split_once('\n').unwrap();
    assert_eq!(first, CSV_SCHEMA);
    csv::Reader::from_reader(rest.as_bytes())
        .deserialize()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn sweep_of_two_generators() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let o = monpres(&[
        "sweep",
        "--family",
        "one",
        "--max-n",
        "2",
        "--max-exp",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.parameters.contains("k=1") && r.agree));
    for r in rows.iter().filter(|r| r.verdict == "NormalPositive") {
        assert_eq!(
            (r.formula.as_str(), r.matrix.as_str(), r.facet.as_str()),
            ("0", "0", "0")
        );
    }
    assert_eq!(
        rows.iter().map(|r| r.index).collect::<Vec<_>>(),
        (0..6).collect::<Vec<_>>()
    );
}

#[test]
fn two_relation_sweep_agrees() {
    let o = monpres(&["sweep", "--family", "two", "--max-n", "5", "--max-exp", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_rows(&stdout(&o));
    assert_eq!(rows.len(), 14);
    assert!(rows
        .iter()
        .all(|r| r.agree && r.verdict == "NormalPositive" && r.formula == r.facet));
}

#[test]
fn sweep_caps_are_enforced() {
    assert_eq!(
        monpres(&["sweep", "--family", "one", "--max-n", "12"]).status.code(),
        Some(2)
    );
}
