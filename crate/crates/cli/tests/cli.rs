use std::process::{Command, Output};

use condlogic::audit::VerdictRecord;
use condlogic::report::PaperReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condlogic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn eval_examples() {
    for (args, want) in [
        (
            &["eval", "p -> q", "p=0,q=1", "--logic", "df-tt"][..],
            "1/2",
        ),
        (&["eval", "p -> q", "p=1/2,q=0", "--logic", "cc-tt"], "0"),
        (&["eval", "p & q", "p=1,q=1/2", "--logic", "qcc-tt"], "1"),
    ] {
        let o = run(args);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn eval_rejects_bad_input() {
    assert_eq!(code(&run(&["eval", "p ->", "p=1"])), 2);
    assert_eq!(code(&run(&["eval", "p & q", "p=1"])), 2);
    assert_eq!(code(&run(&["eval", "p", "p=2"])), 2);
}

#[test]
fn check_exit_codes() {
    let o = run(&["check", "p => q |- p -> q", "--logic", "df-tt"]);
    assert_eq!(code(&o), 0);
    let o = run(&["check", "p => q |- p -> q", "--logic", "cc-tt"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("p=1/2 q=0"), "{}", stdout(&o));
    assert_eq!(code(&run(&["check", "p |- p"])), 0);
    assert_eq!(code(&run(&["check", "p p"])), 2);
    assert_eq!(code(&run(&["check", "p |- p", "--logic", "k3"])), 2);
}

#[test]
fn atom_bound_is_enforced() {
    let o = run(&["check", "p, q, r |- p", "--atom-bound", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn mode_flag_changes_consequence() {
    assert_eq!(code(&run(&["check", "|- p -> p"])), 0);
    assert_eq!(code(&run(&["check", "|- p -> p", "--mode", "ss"])), 1);
    assert_eq!(code(&run(&["check", "|- p -> p", "--logic", "df-ss"])), 1);
}

#[test]
fn countermodels_are_listed_in_order() {
    let o = run(&["countermodels", "p |- q", "--limit", "2", "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cms = v["countermodels"].as_array().unwrap();
    assert_eq!(cms.len(), 2);
    assert_eq!(cms[0]["valuation"]["p"], "1/2");
    assert_eq!(cms[0]["valuation"]["q"], "0");
    assert_eq!(cms[1]["valuation"]["p"], "1");
}

#[test]
fn table_json_uses_strings() {
    let o = run(&["table", "cond-df", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["table"][2], serde_json::json!(["1/2", "1/2", "1/2"]));
    assert_eq!(v["table"][0], serde_json::json!(["1", "1/2", "0"]));
}

#[test]
fn corpus_limits() {
    let o = run(&["corpus", "--atoms", "p", "--depth", "0"]);
    assert_eq!(stdout(&o).trim(), "p");
    assert_eq!(code(&run(&["corpus", "--depth", "4"])), 2);
    assert_eq!(code(&run(&["corpus", "--atoms", "p,q,r,s"])), 2);
}

#[test]
fn audit_json_round_trips() {
    let o = run(&["audit", "gibbard", "--logic", "cc-tt", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let records: Vec<VerdictRecord> = serde_json::from_value(v["records"].clone()).unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().all(|r| r.matches));
    assert_eq!(serde_json::to_value(&records).unwrap(), v["records"]);
    let iii = records.iter().find(|r| r.condition == "(iii)").unwrap();
    assert_eq!(iii.paper_expectation, "fails");
    assert!(iii.witness.is_some());
}

#[test]
fn audits_match_for_presets() {
    for (which, logic) in [
        ("mandelkern", "qdf-tt"),
        ("khoo", "cc-tt"),
        ("collapse", "qcc-tt"),
        ("fitelson", "cc-tt"),
    ] {
        let o = run(&["audit", which, "--logic", logic]);
        assert_eq!(code(&o), 0, "{which} {logic}: {}", stdout(&o));
        assert!(stdout(&o).trim_end().ends_with("MATCH"));
    }
}

#[test]
fn paper_report_matches() {
    let o = run(&["paper-report"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("MATCH: 5 sections"));
}

#[test]
fn corrupted_golden_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let shipped = include_str!("../../core/data/gibbard.toml");
    let corrupted = shipped.replacen("\"DF/TT\" = [\"yes\"", "\"DF/TT\" = [\"no\"", 1);
    assert_ne!(corrupted, shipped);
    std::fs::write(dir.path().join("gibbard.toml"), corrupted).unwrap();
    let o = run(&[
        "paper-report",
        "--depth",
        "2",
        "--golden-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("MISMATCH: gibbard"), "{}", stdout(&o));
}

#[test]
fn malformed_golden_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("khoo.toml"), "version = 1\ncolumns = 3\n").unwrap();
    let o = run(&["paper-report", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

/// The JSON report is identical for one and many workers, matches in every
/// section and round-trips through its type.
#[test]
fn json_report_is_deterministic() {
    let one = run(&["paper-report", "--json", "--workers", "1"]);
    let many = run(&["paper-report", "--json", "--workers", "8"]);
    assert_eq!(code(&one), 0);
    assert_eq!(code(&many), 0);
    assert_eq!(one.stdout, many.stdout);
    let report: PaperReport = serde_json::from_str(&stdout(&one)).unwrap();
    assert!(report.sections.iter().all(|s| s.matches));
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap() + "\n",
        stdout(&one)
    );
}

#[test]
fn audit_output_does_not_depend_on_workers() {
    let args = ["audit", "fitelson", "--logic", "qcc-tt", "--json"];
    let one = run(&[&args[..], &["--workers", "1"]].concat());
    let many = run(&[&args[..], &["--workers", "8"]].concat());
    assert_eq!(one.stdout, many.stdout);
}
