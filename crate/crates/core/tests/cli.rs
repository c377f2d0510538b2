use std::process::Command;

use cuspdist::cli::run;
use cuspdist::harness::{parse_report, CACHE_ENV};

fn cli(args: &[&str]) -> cuspdist::cli::Outcome {
    run(std::iter::once("cuspdist").chain(args.iter().copied()))
}

const WORKED: &[&str] = &["classify", "--q0", "3", "--ramified", "--n", "4", "--l", "5", "--central-angle", "1/2"];

#[test]
fn classify_worked_instance() {
    let out = cli(WORKED);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["r"], 4);
    assert_eq!(v["distinguished"]["verdict"], "yes");
    assert_eq!(v["lift"]["value"], true);
    assert_eq!(v["lift"]["support_restriction"], "nu0_inverse");
}

#[test]
fn classify_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = cli(WORKED);
    let path = dir.path().join("c.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let again = cli(&["classify", "--file", path.to_str().unwrap()]);
    assert_eq!(again.code, 0, "{}", again.stderr);
    assert_eq!(again.stdout, first.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).code, 0);
    assert_eq!(cli(&["oracle", "--q", "5"]).code, 0);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["classify", "--q0", "5", "--n", "2", "--l", "5"]).code, 3);
    assert_eq!(cli(&["classify", "--q0", "3", "--n", "2", "--central-angle", "x/y"]).code, 2);
    assert_eq!(cli(&["oracle", "--q", "25"]).code, 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ext\": {\"q0\": 3, \"ramified\": true}, \"n\": ").unwrap();
    let out = cli(&["classify", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line"), "{}", out.stderr);
    let extra = dir.path().join("extra.json");
    std::fs::write(&extra, "{\"ext\": {\"q0\": 3, \"ramified\": true, \"colour\": 1}}").unwrap();
    assert_eq!(cli(&["classify", "--file", extra.to_str().unwrap()]).code, 2);

    let fails = cli(&["verify", "--q0", "3", "--n", "2", "--l", "5", "--properties", "P4", "--oracle-max-q", "1"]);
    assert_eq!(fails.code, 0, "a skipped cell is not a failure: {}", fails.stderr);
}

#[test]
fn verify_csv_single_row() {
    let out = cli(&["verify", "--q0", "3", "--n", "2", "--l", "5", "--extensions", "ramified", "--properties", "P1", "--format", "csv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 2, "{}", out.stdout);
    assert_eq!(lines[0], "property,q,n,ell,ext,status,reason,checked,witness");
    assert!(lines[1].starts_with("P1,3,2,,,pass,"), "{}", lines[1]);
}

#[test]
fn verify_report_is_deterministic() {
    let args = ["verify", "--q0", "3,5", "--n", "1,2,3", "--l", "2,5", "--threads", "2"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let report = parse_report(&a.stdout).unwrap();
    assert_eq!(report.failures(), 0);
    assert!(report.meta.timestamp.is_none());
    let stamped = cli(&["verify", "--q0", "3", "--n", "1", "--l", "2", "--properties", "P1", "--timestamp"]);
    assert!(parse_report(&stamped.stdout).unwrap().meta.timestamp.is_some());
}

#[test]
fn enumerate_and_lifts() {
    let out = cli(&["enumerate", "--q", "5", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["count"], 10);
    assert_eq!(v["mobius_count"], 10);
    let out = cli(&["lifts", "--q0", "3", "--ramified", "--n", "4", "--l", "5"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["lemma"], true);
}

#[test]
fn cache_records_and_audits() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let bin = env!("CARGO_BIN_EXE_cuspdist");
    let run_bin = |args: &[&str]| Command::new(bin).args(args).env(CACHE_ENV, &cache).output().unwrap();

    let first = run_bin(WORKED);
    assert_eq!(first.status.code(), Some(0));
    let second = run_bin(WORKED);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 1);

    let v = run_bin(&["verify", "--q0", "3", "--n", "2", "--l", "5", "--properties", "P1,P8", "--audit", "1"]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    let text = String::from_utf8(v.stdout).unwrap();
    assert!(text.contains("\"cache_audit\""));
    assert!(text.contains("\"mismatches\": []"));

    let mut lines: Vec<String> = std::fs::read_to_string(&cache).unwrap().lines().map(String::from).collect();
    let mut entry: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    entry["verdicts"]["r"] = 3.into();
    lines.push(entry.to_string());
    std::fs::write(&cache, lines.join("\n") + "\n").unwrap();
    let tampered = run_bin(WORKED);
    assert_eq!(tampered.status.code(), Some(3));
    let audit = run_bin(&["verify", "--q0", "3", "--n", "1", "--l", "5", "--properties", "P1", "--audit", "1"]);
    assert_eq!(audit.status.code(), Some(1));
}
