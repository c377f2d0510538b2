use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Cache, GridSpec, PropertyId, PropertyReport, Status, ENGINE_VERSION};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub engine_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub summary: BTreeMap<PropertyId, Summary>,
    pub rows: Vec<PropertyReport>,
}

impl Report {
    pub fn new(rows: Vec<PropertyReport>, grid: Option<GridSpec>, timestamp: Option<String>) -> Self {
        let mut summary: BTreeMap<PropertyId, Summary> = BTreeMap::new();
        for r in &rows {
            let s = summary.entry(r.property).or_default();
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        Report { meta: Meta { engine_version: ENGINE_VERSION.into(), timestamp }, grid, summary, rows }
    }

    pub fn failures(&self) -> u64 {
        self.summary.values().map(|s| s.fail).sum()
    }
}

/// Renders a report. The JSON form carries the timestamp only under `meta`.
pub fn emit_report(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map_err(|e| Error::Json(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io { path: "<csv>".into(), message: e.to_string() };
            w.write_record(["property", "q", "n", "ell", "ext", "status", "reason", "checked", "witness"]).map_err(io)?;
            for r in &report.rows {
                let ext = r
                    .cell
                    .ext
                    .map(|e| format!("{}:{}", if e.ramified { "ramified" } else { "unramified" }, e.q0))
                    .unwrap_or_default();
                let status = serde_json::to_value(r.status).map_err(|e| Error::Json(e.to_string()))?;
                w.write_record([
                    r.property.to_string(),
                    r.cell.q.to_string(),
                    r.cell.n.to_string(),
                    r.cell.ell.map(|l| l.to_string()).unwrap_or_default(),
                    ext,
                    status.as_str().unwrap_or_default().to_string(),
                    r.reason.clone().unwrap_or_default(),
                    r.checked.to_string(),
                    r.witness.as_ref().map(|v| v.to_string()).unwrap_or_default(),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io { path: "<csv>".into(), message: e.to_string() })?;
            String::from_utf8(bytes).map_err(|e| Error::Io { path: "<csv>".into(), message: e.to_string() })
        }
    }
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}

/// Appends one cache record per row, keyed by the hash of the property, the cell and
/// the settings that affect it.
pub fn record_reports(cache: &mut Cache, spec: &GridSpec, rows: &[PropertyReport]) -> Result<()> {
    for r in rows {
        let datum = json!({
            "kind": "battery",
            "property": r.property,
            "cell": r.cell,
            "exhaustive_limit": spec.exhaustive_limit,
            "oracle": spec.oracle,
            "oracle_max_q": spec.oracle_max_q,
        });
        let verdicts = json!({ "status": r.status, "checked": r.checked });
        cache.put(&datum, &verdicts)?;
    }
    Ok(())
}
