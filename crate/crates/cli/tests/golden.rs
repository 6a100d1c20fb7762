//! Reports compared byte for byte with checked-in files. Set
//! `TRESOR_UPDATE_GOLDEN=1` to rewrite the files after an intended change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use clap::Parser;
use tresor::input::read_ledger;
use tresor::render::{self, Style};
use tresor::report;
use tresor::{run, Cli};
use tresor_core::transfer::operating_cash_surplus;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("TRESOR_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs:\n--- expected\n{expected}\n--- actual\n{actual}");
}

fn binary(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_tresor")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn ledger_arg() -> String {
    fixture("ledger.json").display().to_string()
}

#[test]
fn cash_table_text() {
    let ledger = ledger_arg();
    let from_binary = binary(&["cash-table", "--ledger", &ledger, "--period", "2"]);
    check_golden("cash_table.txt", &from_binary);

    // the library renders the same bytes
    let l = read_ledger(&fixture("ledger.json")).unwrap();
    let table = operating_cash_surplus(&l.ledger, 2).unwrap();
    let rendered = render::text(&report::cash_table(&table, Style::Rounded).tables, Style::Rounded);
    assert_eq!(rendered, from_binary);
}

#[test]
fn cash_table_is_identical_from_json_and_csv_ledgers() {
    let json = binary(&["cash-table", "--ledger", &ledger_arg(), "--format", "csv"]);
    let dir = fixture("ledger_csv").display().to_string();
    let csv = binary(&["cash-table", "--ledger", &dir, "--format", "csv"]);
    assert_eq!(json, csv);
    check_golden("cash_table.csv", &csv);
}

#[test]
fn cash_table_raw_json() {
    let cli = Cli::parse_from(["tresor", "cash-table", "--ledger", &ledger_arg(), "--format", "json", "--raw"]);
    check_golden("cash_table.json", &run(&cli).unwrap());
}

#[test]
fn surplus_and_waterfall_text() {
    let ledger = ledger_arg();
    check_golden("surplus.txt", &binary(&["surplus", "--ledger", &ledger]));
    check_golden("waterfall.txt", &binary(&["waterfall", "--ledger", &ledger, "--period", "2"]));
}

#[test]
fn repeated_runs_are_identical() {
    let scenario = fixture("credits.json").display().to_string();
    let args = ["breakeven", "--scenario", &scenario, "--format", "json"];
    let first = binary(&args);
    for _ in 0..3 {
        assert_eq!(binary(&args), first);
    }
    check_golden("breakeven_credits.json", &first);
}
