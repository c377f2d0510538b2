use cuspdist::harness::{
    conjecture_table, emit_report, parse_report, run_battery, Format, GridSpec, PropertyId, Report, Status,
};
use cuspdist::verdict::Verdict;

fn small() -> GridSpec {
    GridSpec { q0: vec![3, 5], n: vec![1, 2, 3, 4], ell: vec![2, 3, 5], oracle_max_q: 9, ..GridSpec::default() }
}

#[test]
fn empty_grid_gives_empty_report() {
    let rows = run_battery(&GridSpec::empty());
    assert!(rows.is_empty());
    let report = Report::new(rows, None, None);
    assert!(report.summary.is_empty());
    assert_eq!(parse_report(&emit_report(&report, Format::Json).unwrap()).unwrap(), report);
    assert_eq!(emit_report(&report, Format::Csv).unwrap().lines().count(), 1);
}

#[test]
fn battery_is_deterministic_across_thread_counts() {
    let one = GridSpec { threads: Some(1), ..small() };
    let three = GridSpec { threads: Some(3), ..small() };
    let a = Report::new(run_battery(&one), None, None);
    let b = Report::new(run_battery(&three), None, None);
    assert_eq!(emit_report(&a, Format::Json).unwrap(), emit_report(&b, Format::Json).unwrap());
    assert_eq!(a.failures(), 0, "{:?}", a.rows.iter().find(|r| r.status == Status::Fail));
}

#[test]
fn summary_matches_rows() {
    let spec = small();
    let report = Report::new(run_battery(&spec), Some(spec.clone()), Some("0".into()));
    let total: u64 = report.summary.values().map(|s| s.pass + s.fail + s.skipped).sum();
    assert_eq!(total as usize, report.rows.len());
    for p in PropertyId::ALL {
        let s = report.summary[&p];
        let skipped = report.rows.iter().filter(|r| r.property == p && r.status == Status::Skipped).count();
        assert_eq!(s.skipped as usize, skipped);
        assert!(report.rows.iter().filter(|r| r.status == Status::Skipped).all(|r| r.reason.is_some()));
    }
    assert!(report.summary[&PropertyId::P4].skipped > 0, "q = 25 exceeds the oracle limit 9");
    let csv = emit_report(&report, Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), report.rows.len() + 1);
    let back = parse_report(&emit_report(&report, Format::Json).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn malformed_report_reports_position() {
    let err = parse_report("{\n  \"meta\": 3\n}").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn even_rank_comparison() {
    let spec = GridSpec { q0: vec![3], n: vec![2, 4], ell: vec![5], ..GridSpec::default() };
    let rows = conjecture_table(&spec).unwrap();
    assert!(!rows.is_empty());
    for r in &rows {
        if r.lift {
            assert_eq!(r.distinguished, Verdict::Yes, "{:?}", r.cell);
        }
    }
}
