use std::process::{Command, Output};

use serde_json::Value;

fn lampdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lampdim"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_graphs_passes() {
    let out = lampdim(&["verify-graphs", "--graph-max", "6", "--no-timestamp"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r["tool"], "lampdim");
    assert_eq!(r["command"], "verify-graphs");
    assert_eq!(r["pass"], true);
    assert!(r.get("timestamp").is_none());
    let dichotomy = r["result"]["dichotomy"].as_array().unwrap();
    let j47 = dichotomy.iter().find(|d| d["family"] == "j(4,7)").unwrap();
    assert_eq!(j47["kernel_dim"], 2);
}

#[test]
fn tampered_operator_fails_verify_graphs() {
    let out = lampdim(&["verify-graphs", "--graph-max", "4", "--tamper", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert!(!r["result"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn runs_are_byte_identical_without_timestamp() {
    let args = [
        "monte-carlo",
        "--samples",
        "3000",
        "--seed",
        "11",
        "--kmax",
        "8",
        "--no-timestamp",
    ];
    let a = lampdim(&args);
    let b = lampdim(&[&args[..], &["--workers", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    let (mut ra, mut rb) = (report(&a), report(&b));
    ra["config"]["workers"] = Value::Null;
    rb["config"]["workers"] = Value::Null;
    assert_eq!(ra, rb);
    assert_eq!(a.stdout, lampdim(&args).stdout);
}

#[test]
fn timestamp_present_by_default() {
    let out = lampdim(&["measures", "--graph-max", "2"]);
    assert!(report(&out)["timestamp"].is_string());
}

#[test]
fn measures_sum_to_one_at_p7() {
    let out = lampdim(&["measures", "--p", "7", "--graph-max", "4", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["probability_sum"]["total"], "1");
    assert_eq!(r["result"]["partition_ok"], true);
}

#[test]
fn census_csv_has_h1_row() {
    let out = lampdim(&["measures", "--graph-max", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let h1 = rows.iter().find(|r| &r[0] == "h(1)").expect("h(1) row");
    assert_eq!(&h1[1], "3");
    assert_eq!(&h1[2], "3/128");
}

#[test]
fn dimension_reports_disjoint_enclosures() {
    let out = lampdim(&["dimension", "--kmax", "10", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["intersect"], false);
    assert_eq!(r["result"]["defect"], "1/128");
    assert_eq!(r["result"]["defect_explained"], true);
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = lampdim(&["export", "--out", path.to_str().unwrap(), "--no-timestamp"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r["result"]["report"]["round_trip_failures"], 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let element: lampdim::duality::GroupRingElement = serde_json::from_str(&text).unwrap();
    assert_eq!(
        element.len(),
        r["result"]["report"]["exported_terms"].as_u64().unwrap() as usize
    );
    let again = serde_json::to_string_pretty(&element).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lampdim(&["measures", "--p", "1"]).status.code(), Some(2));
    assert_eq!(lampdim(&["export", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(lampdim(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn env_vars_configure_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_lampdim"))
        .args(["measures", "--graph-max", "2"])
        .env_clear()
        .env("LAMPDIM_P", "5")
        .env("LAMPDIM_NO_TIMESTAMP", "true")
        .output()
        .unwrap();
    let r = report(&out);
    assert_eq!(r["config"]["p"], 5);
    assert!(r.get("timestamp").is_none());
}

#[test]
fn report_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = lampdim(&["measures", "--graph-max", "2", "--out", path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["command"], "measures");
}
