//! End-to-end checks of the binary: exit codes, output formats, and the
//! documented command surface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treeshift"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn entropy_gms_human() {
    let out = run(&["entropy", data("gms.sft").to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("entropy: 0.508898806"), "{text}");
    assert!(text.contains("type: {C,D}"), "{text}");
}

#[test]
fn entropy_gms_ndjson() {
    let out = run(&["entropy", data("gms.sft").to_str().unwrap(), "--ndjson"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(text.trim()).expect("valid json");
    assert_eq!(v["d"], 2);
    assert_eq!(v["k"], 2);
    assert_eq!(v["indicators"][0], serde_json::json!([1, 2, 1]));
    let h = v["entropy_nats"].as_f64().unwrap();
    assert!((h - 0.508898806889492).abs() < 1e-9);
    assert_eq!(v["type"]["primary"], "C");
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn entropy_csv_and_bits() {
    let out = run(&["entropy", data("gms.sft").to_str().unwrap(), "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("id,d,k,indicators"));
    assert!(lines.next().unwrap().starts_with("gms,2,2,"));

    let out = run(&["entropy", data("gms.sft").to_str().unwrap(), "--bits"]);
    let text = stdout(&out);
    // 0.508898806.../ln 2
    assert!(text.contains("entropy: 0.734185785"), "{text}");
    assert!(text.contains("bits"));
}

#[test]
fn entropy_oscillating_cell() {
    let out = run(&["entropy", data("oscillating.sft").to_str().unwrap(), "--ndjson"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let h = v["entropy_nats"].as_f64().unwrap();
    assert!((h - 0.214332471399564).abs() < 1e-9);
    assert_eq!(v["type"]["primary"], "O");
    assert_eq!(v["method"], "O-series");
}

#[test]
fn entropy_empty_shift() {
    let out = run(&["entropy", data("empty.sft").to_str().unwrap(), "--ndjson"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["entropy_nats"].as_f64().unwrap(), 0.0);
    assert!(v["flags"].as_array().unwrap().iter().any(|f| f == "empty"));
}

#[test]
fn entropy_methods_agree() {
    for method in ["auto", "generic", "closed"] {
        let out = run(&[
            "entropy",
            data("gms.sft").to_str().unwrap(),
            "--method",
            method,
            "--ndjson",
        ]);
        assert!(out.status.success(), "method {method}: {}", stderr(&out));
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        let h = v["entropy_nats"].as_f64().unwrap();
        assert!((h - 0.508898806889492).abs() < 1e-9, "method {method}: h = {h}");
    }
}

#[test]
fn entropy_one_generator() {
    let out = run(&["entropy", data("gms_1d.sft").to_str().unwrap(), "--ndjson"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let h = v["entropy_nats"].as_f64().unwrap();
    let golden = ((1.0 + 5.0f64.sqrt()) / 2.0).ln();
    assert!((h - golden).abs() < 1e-9);
}

#[test]
fn validation_exit_code() {
    let dir = tempdir();
    let bad = dir.join("bad.sft");
    std::fs::write(&bad, "d=2\nk=2\nforbid 3 * 1\n").unwrap();
    let out = run(&["entropy", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("line 3"));

    let out = run(&["entropy", dir.join("missing.sft").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_outputs() {
    let out = run(&["classify", data("gms.sft").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "{C,D} (theorem-case; empirical agrees)");

    let out = run(&["classify", data("oscillating.sft").to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "O (theorem-case; empirical agrees)");

    let dir = tempdir();
    let dominating = dir.join("dominating.sft");
    std::fs::write(&dominating, "d=2\nk=2\nsnre 1 : 2 * 1 2\nsnre 2 : 1 * 1 1\n").unwrap();
    let out = run(&["classify", dominating.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "D (theorem-case; empirical agrees)");

    // outside (2,2) only the empirical detector applies
    let out = run(&["classify", data("gms_1d.sft").to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).trim().ends_with("(empirical)"), "{}", stdout(&out));
}

#[test]
fn oracle_gms_matches() {
    let out = run(&["oracle", data("gms.sft").to_str().unwrap(), "--n", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("OK: 6/6 counts match"), "{}", stdout(&out));
}

#[test]
fn oracle_rejects_snre_style() {
    let out = run(&["oracle", data("case_iv.sft").to_str().unwrap(), "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_rejects_infeasible_height() {
    let out = run(&["oracle", data("gms.sft").to_str().unwrap(), "--n", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_runs_and_is_stable() {
    let a = run(&["table", "--d", "2", "--k", "2"]);
    assert!(a.status.success());
    let b = run(&["table", "--d", "2", "--k", "2"]);
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.contains("# entropies for |F^(a)| = 2"));
    assert!(text.contains("# entropies for |F^(a)| = 4"));
    // 3 titles + 3 headers + 3+7+10 rows + 2 blank separators
    assert_eq!(text.lines().count(), 28);
    // frozen first data row (also pins the 6-decimal rendering)
    assert!(
        text.contains("\"(1,0,0)\",0.285678,0.254449,0.214332,0.231049"),
        "{text}"
    );
    assert!(text.contains("\"(1,2,0)\",0.634567"), "{text}");
    let out = run(&["table", "--d", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_golden_reports_known_diffs() {
    // the embedded reference values contain truncation artifacts: the diff
    // must list them cell by cell and exit 4
    let out = run(&["table", "--d", "2", "--k", "2", "--golden"]);
    assert_eq!(out.status.code(), Some(4));
    let err = stderr(&out);
    assert!(err.contains("golden mismatches (34 of 43 cells)"), "{err}");
    assert!(err.contains("va=(0,2,1) vb=(1,0,0)"), "{err}");
    assert!(err.contains("computed 0.346574 reference 0.517933"), "{err}");
}

#[test]
fn gms_semigroup_and_chessboard() {
    let out = run(&["gms", "--structure", "semigroup", "--d", "2", "--k", "2", "--ndjson"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json_line = text.lines().find(|l| l.starts_with('{')).unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert!((v["entropy_nats"].as_f64().unwrap() - 0.508898806889492).abs() < 1e-9);

    let out = run(&["gms", "--structure", "chessboard", "--d", "2", "--k", "3", "--ndjson"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json_line = text.lines().find(|l| l.starts_with('{')).unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert!((v["entropy_nats"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-9);
    assert!(v["flags"].as_array().unwrap().iter().any(|f| f == "corollary-discrepancy"));
}

#[test]
fn gms_freegroup_consistency_line() {
    let out = run(&["gms", "--structure", "freegroup", "--d", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("root branching 4"), "{text}");
    assert!(text.contains("consistency: series"), "{text}");
    // unverified k >= 3 requires the explicit opt-in
    let out = run(&["gms", "--structure", "freegroup", "--d", "2", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["gms", "--structure", "freegroup", "--d", "2", "--k", "3", "--experimental"]);
    assert!(out.status.success(), "{}", stderr(&out));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treeshift-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
