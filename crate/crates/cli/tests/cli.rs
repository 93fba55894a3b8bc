use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use flagdesign::numth::{DivSolution, PillaiSolution};
use flagdesign::params::DesignParameters;
use flagdesign::report::ClassificationReport;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flagdesign"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/design45.design")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Parses JSON into `T`, serializes it again, and checks nothing was lost.
fn round_trip<T: Serialize + DeserializeOwned>(json: &str) -> T {
    let value: T = serde_json::from_str(json).unwrap();
    let again = serde_json::to_value(&value).unwrap();
    let original: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(again, original);
    value
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pg32.design");
    let p = path.to_str().unwrap();
    assert_eq!(code(&["construct", "pg-collinear", "--h", "4", "--q", "2", "-o", p]), 0);
    assert_eq!(stdout(&["verify", p]), "2-(15,3,1), b=35, symmetric: no\n");
    let out = run(&["analyze", p]);
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("check.flag_transitive = pass"));
    assert!(report.contains("check.symmetric = fail"));
    assert!(report.contains("conclusion = outside-hypotheses"));
}

#[test]
fn params_and_numth_examples() {
    let rows = stdout(&["params", "type1", "--lambda-max", "4"]);
    assert!(rows.contains("2-(45,12,3) c=9 d=5"));
    assert!(rows.contains("2-(96,20,4) c=16 d=6"));
    assert_eq!(rows.lines().count(), 2);
    assert_eq!(stdout(&["numth", "primitive-part", "2", "6"]), "1\n");
    assert_eq!(stdout(&["numth", "qbin", "4", "2", "2"]), "35\n");
    assert_eq!(stdout(&["numth", "rho", "27", "3", "336"]), "29\n");
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let not_design = write(dir.path(), "bad.design", "design v=9\nblock 0 1 2\n");
    let malformed = write(dir.path(), "malformed.design", "design v=3\nblock 2 1\n");
    let crlf = write(dir.path(), "crlf.design", "design v=3\r\nblock 0 1\r\n");
    let wrong_group = write(
        dir.path(),
        "group.design",
        "design v=7\nblock 0 1 2\nblock 0 3 4\nblock 0 5 6\nblock 1 3 5\nblock 1 4 6\nblock 2 3 6\nblock 2 4 5\ngroup degree=7\ngen (0 1)\n",
    );
    let fano = write(
        dir.path(),
        "fano.design",
        "design v=7\nblock 0 1 2\nblock 0 3 4\nblock 0 5 6\nblock 1 3 5\nblock 1 4 6\nblock 2 3 6\nblock 2 4 5\n",
    );
    let cases: &[(&[&str], i32)] = &[
        (&["verify", &fano], 0),
        (&["analyze", &fano], 0),
        (&["verify", &not_design], 1),
        (&["analyze", &not_design], 1),
        (&["verify", &malformed], 2),
        (&["verify", &crlf], 2),
        (&["analyze", &wrong_group], 2),
        (&["verify", "/nonexistent/file.design"], 2),
        (&["bogus"], 2),
        (&[], 2),
        (&["params", "type1", "--lambda-max", "1e3"], 2),
        (&["params", "type1", "--lambda-max", "+5"], 2),
        (&["params", "type1", "--lambda-max", "1000000"], 2),
        (&["numth", "pillai", "--bound", "100000000"], 2),
        (&["numth", "primitive-part", "2", "-6"], 2),
        (&["numth", "qbin", "3", "1", "1"], 2),
        (&["construct", "pg-collinear", "--h", "20", "--q", "2"], 2),
        (&["construct", "ag-lines", "--h", "2", "--q", "6"], 2),
        (&["numth", "lemma-div", "--pm-max", "100"], 0),
        (&["construct", "ag-lines", "--h", "2", "--q", "3"], 0),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn fixture_analysis() {
    let f = fixture();
    if !f.exists() {
        return;
    }
    let f = f.to_str().unwrap();
    assert_eq!(code(&["analyze", f]), 0);
    let text = stdout(&["analyze", f]);
    assert!(text.contains("conclusion = matches-45-12-3"));
    assert_eq!(text, stdout(&["analyze", f]));

    let json = stdout(&["--json-output", "analyze", f]);
    let report: ClassificationReport = round_trip(&json);
    assert_eq!((report.k0, report.theta), (Some(3), Some(3)));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    assert_eq!(code(&["--json-output", "analyze", f, "-o", out.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read_to_string(out).unwrap(), json);
}

#[test]
fn json_outputs_round_trip() {
    let rows: Vec<DesignParameters> = round_trip(&stdout(&["--json-output", "params", "k0eq2", "--lambda-max", "40"]));
    assert!(rows.iter().all(DesignParameters::identities_hold));
    let sols: Vec<DivSolution> = round_trip(&stdout(&["--json-output", "numth", "lemma-div", "--pm-max", "6561"]));
    assert_eq!(sols.len(), 2);
    let sols: Vec<PillaiSolution> = round_trip(&stdout(&["--json-output", "numth", "pillai", "--bound", "1000"]));
    assert!(sols.iter().any(|s| (s.p, s.m, s.u, s.h) == (5, 2, 3, 3)));
    let v: serde_json::Value = round_trip(&stdout(&["--json-output", "numth", "primitive-part", "3", "5"]));
    assert_eq!(v["value"], "121");

    let built: serde_json::Value = round_trip(&stdout(&["--json-output", "construct", "ag-lines", "--h", "2", "--q", "3"]));
    assert_eq!(built["v"], 9);
    assert_eq!(built["group_order"], serde_json::json!([432]));
    let text = built["design_file"].as_str().unwrap();
    let parsed = flagdesign::format::parse_design_file(text, false).unwrap();
    assert_eq!(parsed.design.b(), 12);

    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ag.design", text);
    let verified: serde_json::Value = round_trip(&stdout(&["--json-output", "verify", &p]));
    assert_eq!(verified["params"]["lambda"], 1);
}
