use std::path::PathBuf;
use std::process::{Command, Output};

fn tables() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tables")
}

fn epnt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epnt")).args(args).env_remove("EPNT_PRECISION").env_remove("EPNT_ANCHORS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn theta_to_pi_headline_constant() {
    let o = epnt(&["convert-asymp", "theta-to-pi", "--A", "121.0961", "--B", "3/2", "--C", "2", "--R", "5.5666305", "--anchor", "crossing", "--log-x1", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A_pi = 121.103 (rounded up)"), "{}", stdout(&o));
}

#[test]
fn mu_num_infinite_tail() {
    let theta = tables().join("theta.csv");
    let o = epnt(&["mu", "num", "--anchor", "1e15", "--theta-table", theta.to_str().unwrap(), "--log-x1", "100", "--log-x2", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("mu_num = 0.0199011 (rounded up)"), "{out}");
    assert!(out.contains("(Infinite)"));
}

#[test]
fn eval_asymp_interpolation_row() {
    let o = epnt(&["eval", "asymp", "--A", "121.107", "--B", "3/2", "--C", "2", "--log-x", "100", "--digits", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1.9202 (rounded up)");
}

#[test]
fn eval_step_reads_table() {
    let t = tables().join("table4.csv");
    let o = epnt(&["eval", "step", "--table", t.to_str().unwrap(), "--log-x", "2000", "--digits", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let v: f64 = out.split_whitespace().next().unwrap().parse().unwrap();
    assert!(v >= 1.5701e-12 && v <= 1.5702e-12, "{out}");
}

#[test]
fn crossing_point_digits() {
    let o = epnt(&["crossing-point"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("40.78773251975"));
}

#[test]
fn dominance_violation_exits_one() {
    let t = tables().join("table4.csv");
    let o = epnt(&[
        "verify-dominates", "--table", t.to_str().unwrap(), "--A", "121.107", "--B", "3/2", "--C", "2", "--from", "ln(2)", "--to", "20000", "--prefix-row",
        "ln(2),0.4298",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("dominance: fails"));
}

#[test]
fn weak_bound_small_limit() {
    let o = epnt(&["verify-weak", "--limit", "1000000", "--grid", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations: 0"));
}

#[test]
fn weak_bound_too_small_constant_exits_one() {
    let o = epnt(&["verify-weak", "--limit", "100000", "--constant", "0.3", "--grid", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn regenerate_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let output = dir.path().join("out.csv");
    let (theta, printed) = (tables().join("theta.csv"), tables().join("table4.csv"));
    let o = epnt(&[
        "regenerate", "--theta-table", theta.to_str().unwrap(), "--printed", printed.to_str().unwrap(), "--rows", "2000", "--refinement", "4", "--summary",
        summary.to_str().unwrap(), "--output", output.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    assert!(std::fs::read_to_string(&output).unwrap().contains("2000, "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(epnt(&["eval", "asymp", "--A", "1"]).status.code(), Some(2));
    assert_eq!(epnt(&["eval", "asymp", "--A", "x", "--B", "1", "--C", "1", "--log-x", "10"]).status.code(), Some(2));
    assert_eq!(epnt(&["mu", "asymp", "--A", "1", "--B", "1", "--C", "1", "--anchor", "nope", "--log-x1", "10"]).status.code(), Some(2));
}

#[test]
fn precision_changes_width_not_direction() {
    let lo = epnt(&["--precision", "64", "eval", "asymp", "--A", "121.107", "--B", "3/2", "--C", "2", "--log-x", "3000"]);
    let hi = epnt(&["--precision", "256", "eval", "asymp", "--A", "121.107", "--B", "3/2", "--C", "2", "--log-x", "3000"]);
    assert!(stdout(&lo).ends_with("(rounded up)\n"));
    assert!(stdout(&hi).ends_with("(rounded up)\n"));
}
