//! Harness behavior: cache resume, export round-trips, and the CLI surface
//! with its exit-code contract.

use std::process::Command;

use rank16_cli::cache::parse_csv;
use rank16_cli::config::ScanConfig;
use rank16_cli::report::render_json;
use rank16_cli::scan::run_scan;

#[test]
fn resume_from_cache_equals_uninterrupted_scan() {
    let reference = run_scan(&ScanConfig::with_x_max(5000)).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("scan.csv");

    // simulate a scan that died mid-way: header plus the first 100 rows
    let prefix: String = reference
        .csv
        .lines()
        .take(101)
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&cache, &prefix).unwrap();

    let resumed = run_scan(&ScanConfig {
        cache: Some(cache.clone()),
        ..ScanConfig::with_x_max(5000)
    })
    .unwrap();

    assert_eq!(resumed.resumed_rows, 100);
    assert_eq!(resumed.csv, reference.csv);
    assert_eq!(render_json(&resumed.report), render_json(&reference.report));
    // the cache file itself has converged to the full artifact
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), reference.csv);
}

#[test]
fn small_scan_row_counts() {
    // every prime gets a row, including p = 2 with its mostly-empty columns
    let out = run_scan(&ScanConfig::with_x_max(1000)).unwrap();
    assert_eq!(out.records.len(), 168);
    assert_eq!(out.csv.lines().count(), 169); // header + rows
    let c = &out.report.counts;
    assert_eq!(c.e_minus_1 + c.e_plus_2 + c.e_minus_2, 167);
}

#[test]
fn foreign_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("scan.csv");
    // a row claiming p=4 is not a prefix of any prime sequence
    std::fs::write(
        &cache,
        "p,split,a,b,c,d,u,v,g,h,h_neg_p,h_neg_2p,h_plus_2p,E,alpha,beta,hasse_Q,cell\n4,0,,,,,,,,,,,,,,,,\n",
    )
    .unwrap();
    let err = run_scan(&ScanConfig {
        cache: Some(cache),
        ..ScanConfig::with_x_max(100)
    })
    .unwrap_err();
    assert!(err.to_string().contains("not a prefix"));
}

fn rank16() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rank16"))
}

#[test]
fn cli_scan_verify_export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.csv");
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");

    let status = rank16()
        .args(["scan", "--xmax", "2000"])
        .arg("--cache")
        .arg(&cache)
        .arg("--out-csv")
        .arg(&csv)
        .arg("--out-json")
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        std::fs::read_to_string(&cache).unwrap(),
        std::fs::read_to_string(&csv).unwrap()
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["x_max"], 2000);
    assert_eq!(report["pi_x"], 303);

    // export must reproduce the cache bytes
    let exported = dir.path().join("exported.csv");
    let status = rank16()
        .arg("export")
        .arg("--cache")
        .arg(&cache)
        .args(["--format", "csv"])
        .arg("--out")
        .arg(&exported)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        std::fs::read_to_string(&cache).unwrap(),
        std::fs::read_to_string(&exported).unwrap()
    );

    // json export with the original bound matches the scan report
    let exported_json = dir.path().join("exported.json");
    let status = rank16()
        .arg("export")
        .arg("--cache")
        .arg(&cache)
        .args(["--format", "json", "--xmax", "2000"])
        .arg("--out")
        .arg(&exported_json)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(
        std::fs::read_to_string(&json).unwrap(),
        std::fs::read_to_string(&exported_json).unwrap()
    );

    // rows parse back and tally
    let rows = parse_csv(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(rows.len(), 303);
}

#[test]
fn cli_record_and_verify() {
    let out = rank16().args(["record", "113"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("u = 41, v = 28"));
    assert!(text.contains("E_p = -1"));

    let status = rank16()
        .args(["verify", "--suite", "classnum", "--xmax", "500"])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn cli_exit_codes() {
    // configuration errors exit with 2
    let status = rank16()
        .args(["verify", "--suite", "bogus"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = rank16().args(["scan", "--xmax", "1"]).status().unwrap();
    assert_eq!(status.code(), Some(2));

    let status = rank16().args(["record", "12"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn cli_oscillation_table() {
    let out = rank16()
        .args(["oscillation", "--xmax", "2000", "--chi", "1", "--psi", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("x,pi_x,star_count"));
    assert!(text.contains("log-log slopes"));
}
