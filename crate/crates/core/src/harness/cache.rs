//! Append-only JSON-lines store, keyed by the SHA-256 of the datum's compact JSON.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{run_property, Cell, GridSpec, PropertyId, ENGINE_VERSION};
use crate::error::{Error, Result};
use crate::padic::{classify, LevelZeroCuspidalDatum};

pub const CACHE_ENV: &str = "CUSPDIST_CACHE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub datum: Value,
    pub verdicts: Value,
    pub engine_version: String,
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<String, CacheEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checked: u64,
    pub mismatches: Vec<String>,
}

pub fn key_of(datum: &Value) -> String {
    let digest = Sha256::digest(datum.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

impl Cache {
    /// Loads every line of `path`; a missing file is an empty cache. Later lines win.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        if path.exists() {
            let f = File::open(&path).map_err(|e| io_err(&path, e))?;
            for (i, line) in BufReader::new(f).lines().enumerate() {
                let line = line.map_err(|e| io_err(&path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: CacheEntry = serde_json::from_str(&line)
                    .map_err(|e| Error::Json(format!("{} line {}: {e}", path.display(), i + 1)))?;
                entries.insert(entry.key.clone(), entry);
            }
        }
        Ok(Cache { path, entries })
    }

    pub fn from_env() -> Option<Result<Self>> {
        std::env::var_os(CACHE_ENV).map(Cache::open)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, datum: &Value) -> Option<&Value> {
        self.entries.get(&key_of(datum)).map(|e| &e.verdicts)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CacheEntry> {
        self.entries.values()
    }

    pub fn put(&mut self, datum: &Value, verdicts: &Value) -> Result<()> {
        let entry = CacheEntry {
            key: key_of(datum),
            datum: datum.clone(),
            verdicts: verdicts.clone(),
            engine_version: ENGINE_VERSION.into(),
        };
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(|e| io_err(&self.path, e))?;
        let line = serde_json::to_string(&entry).map_err(|e| Error::Json(e.to_string()))?;
        writeln!(f, "{line}").map_err(|e| io_err(&self.path, e))?;
        self.entries.insert(entry.key.clone(), entry);
        Ok(())
    }

    /// Classification through the cache.
    pub fn classify(&mut self, dat: &LevelZeroCuspidalDatum) -> Result<Value> {
        let datum = json!({ "kind": "classify", "datum": dat });
        if let Some(v) = self.get(&datum) {
            return Ok(v.clone());
        }
        let v = serde_json::to_value(classify(dat)?).map_err(|e| Error::Json(e.to_string()))?;
        self.put(&datum, &v)?;
        Ok(v)
    }

    /// Recomputes every `every`-th entry and compares it with the stored verdicts.
    pub fn audit(&self, every: usize) -> Result<AuditReport> {
        let mut out = AuditReport::default();
        for entry in self.entries.values().step_by(every.max(1)) {
            let fresh = recompute(&entry.datum)?;
            out.checked += 1;
            if fresh != entry.verdicts {
                out.mismatches.push(entry.key.clone());
            }
        }
        Ok(out)
    }
}

fn recompute(datum: &Value) -> Result<Value> {
    let bad = |e: serde_json::Error| Error::Json(e.to_string());
    match datum.get("kind").and_then(Value::as_str) {
        Some("classify") => {
            let d: LevelZeroCuspidalDatum = serde_json::from_value(datum["datum"].clone()).map_err(bad)?;
            serde_json::to_value(classify(&d)?).map_err(bad)
        }
        Some("battery") => {
            let p: PropertyId = serde_json::from_value(datum["property"].clone()).map_err(bad)?;
            let cell: Cell = serde_json::from_value(datum["cell"].clone()).map_err(bad)?;
            let mut spec = GridSpec::default();
            if let Some(x) = datum.get("exhaustive_limit").and_then(Value::as_u64) {
                spec.exhaustive_limit = x;
            }
            if let Some(x) = datum.get("oracle").and_then(Value::as_bool) {
                spec.oracle = x;
            }
            if let Some(x) = datum.get("oracle_max_q").and_then(Value::as_u64) {
                spec.oracle_max_q = x;
            }
            let r = run_property(p, &cell, &spec);
            Ok(json!({ "status": r.status, "checked": r.checked }))
        }
        _ => Err(Error::Json(format!("cache datum of unknown kind: {datum}"))),
    }
}
