use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn tresor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tresor")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = tresor(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&args)).unwrap()
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort_unstable();
    k
}

#[test]
fn leverage_at_twice_the_critical_volume() {
    let v = json(&["leverage", "--F", "8000000", "--m", "8", "--Q", "2000000"]);
    assert_eq!(v["elasticity_wrt_volume"].to_string(), "2.00");
    assert_eq!(v["elasticity_wrt_margin"].to_string(), "2.00");
    assert_eq!(v["critical_production"].to_string(), "1000000.00");
    assert_eq!(v["critical_margin"].to_string(), "4.00");
}

#[test]
fn leverage_at_the_pole_reports_null() {
    let v = json(&["leverage", "--F", "8", "--m", "8", "--Q", "1"]);
    assert!(v["elasticity_wrt_volume"].is_null());
    assert_eq!(v["virtual_treasury"].to_string(), "0.00");
}

#[test]
fn lag_free_thresholds_coincide() {
    let v = json(&["breakeven", "--scenario", &fixture("lag_free.json"), "--raw"]);
    assert_eq!(v["liquidity_threshold"], "6000");
    assert_eq!(v["solvency_threshold"], v["liquidity_threshold"]);
}

#[test]
fn batch_keeps_input_order() {
    let v = json(&[
        "breakeven",
        "--scenario",
        &fixture("credits.json"),
        "--scenario",
        &fixture("lag_free.json"),
        "--scenario",
        &fixture("credits.json"),
    ]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["scenario"].as_str().unwrap()).collect();
    assert_eq!(names, ["credits", "lag-free", "credits"]);
    assert_eq!(v[0]["solvency_threshold"].to_string(), "7200.00");
}

#[test]
fn day_replay_agrees_with_the_threshold() {
    let v = json(&["simulate", "--scenario", &fixture("credits.json"), "--horizon-days", "240", "--raw"]);
    assert_eq!(v["crossings"]["solvency"]["units_sold"], "7200");
    assert_eq!(v["crossings"]["solvency"]["day"], 180);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| tresor(args).status.code().unwrap();
    assert_eq!(code(&["leverage", "--F", "8"]), 2);
    assert_eq!(code(&["leverage", "--F", "abc", "--m", "1", "--Q", "1"]), 2);
    assert_eq!(code(&["surplus", "--ledger", "/does/not/exist.json"]), 2);
    assert_eq!(code(&["breakeven", "--scenario", &fixture("bad_total.json")]), 3);
    assert_eq!(code(&["breakeven", "--scenario", &fixture("no_margin.json")]), 4);
    assert_eq!(code(&["cash-table", "--ledger", &fixture("ledger.json"), "--period", "3"]), 3);
    let out = tresor(&["breakeven", "--scenario", &fixture("no_margin.json")]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert!(out.stdout.is_empty());
}

#[test]
fn unbalanced_ledger_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.json");
    std::fs::write(
        &path,
        r#"{"periods": [{"period": 1, "result_before_tax": 5, "lines": [
            {"id": "s", "kind": "product", "quantity": 1, "unit_value": 10}]}]}"#,
    )
    .unwrap();
    let out = tresor(&["validate", "--ledger", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_report_shapes() {
    let ledger = fixture("ledger.json");
    let s = json(&["surplus", "--ledger", &ledger]);
    assert_eq!(
        keys(&s),
        [
            "balance_ok",
            "base_period",
            "caf_surplus",
            "next_period",
            "productivity_surplus",
            "resources",
            "result_change",
            "total_resources",
            "total_uses",
            "uses"
        ]
    );
    assert_eq!(s["total_resources"], s["total_uses"]);
    assert_eq!(s["balance_ok"], true);

    let t = json(&["cash-table", "--ledger", &ledger]);
    assert_eq!(keys(&t), ["period", "row_iv_by_components", "row_iv_by_rows", "rows"]);
    let codes: Vec<&str> = t["rows"].as_array().unwrap().iter().map(|r| r["row"].as_str().unwrap()).collect();
    assert_eq!(codes.len(), 26);
    assert_eq!(codes.last(), Some(&"VI"));

    let w = json(&["waterfall", "--ledger", &ledger]);
    assert_eq!(keys(&w), ["periods", "variations"]);
    assert_eq!(w["variations"][0]["operating_cash"], t["rows"][25]["amount"]);
}

#[test]
fn curves_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir: PathBuf = dir.path().join("curves");
    let listed = stdout(&[
        "curves",
        "--F",
        "8000000",
        "--m",
        "8",
        "--Q",
        "2000000",
        "--indifference",
        "4000000,8000000",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(listed.lines().count(), 4);
    let volume = std::fs::read_to_string(out_dir.join("volume_elasticity.csv")).unwrap();
    assert!(volume.starts_with("volume,elasticity_wrt_volume\n"));
    assert!(out_dir.join("indifference_2.csv").exists());
}

#[test]
fn explicit_grid_values() {
    let out = stdout(&[
        "curves", "--F", "8000000", "--m", "8", "--Q", "2000000", "--volume-grid", "2000000,4000000", "--curve",
        "volume", "--format", "csv",
    ]);
    assert_eq!(out, "volume,elasticity_wrt_volume\n2000000.00,2.00\n4000000.00,1.33\n");
}

#[test]
fn seasonal_monthly_series() {
    let v = json(&["simulate", "--scenario", &fixture("seasonal.json"), "--monthly", "--horizon-months", "24"]);
    assert_eq!(v["solvency_month"], 13);
}
