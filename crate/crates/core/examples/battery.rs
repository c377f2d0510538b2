//! Runs the property battery on the default grid and prints one line per property.
//!
//! `cargo run --release --example battery [P1 P6 ...]`

use std::time::Instant;

use cuspdist::harness::{minimal_failure, run_battery, GridSpec, PropertyId, Report};

fn main() {
    let mut spec = GridSpec::default();
    let chosen: Vec<PropertyId> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if !chosen.is_empty() {
        spec.properties = chosen;
    }
    let start = Instant::now();
    let rows = run_battery(&spec);
    let report = Report::new(rows, Some(spec), None);
    for p in report.summary.keys().copied() {
        let s = report.summary.get(&p).copied().unwrap_or_default();
        let checked: u64 = report.rows.iter().filter(|r| r.property == p).map(|r| r.checked).sum();
        println!("{p:>4}  pass {:>4}  fail {:>3}  skipped {:>3}  checks {:>8}  {}", s.pass, s.fail, s.skipped, checked, p.describe());
        if let Some(f) = minimal_failure(&report.rows, p) {
            println!("      least failure at {}: {}", f.cell, f.witness.as_ref().map(|w| w.to_string()).unwrap_or_default());
        }
    }
    for r in report.rows.iter().filter(|r| r.reason.is_some()) {
        println!("  {} {}: {}", r.property, r.cell, r.reason.as_deref().unwrap_or(""));
    }
    println!("{} rows in {:.1?}", report.rows.len(), start.elapsed());
}
