//! Grid runs of the property battery, report emission and the results cache.

mod cache;
mod properties;
mod report;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::PrimePower;
use crate::character::Coeff;
use crate::error::{Error, Result};
use crate::finite::QuadResidueExt;
use crate::finite::r_of;
use crate::padic::{self, is_distinguished_level0};
use crate::verdict::Verdict;

pub use cache::{AuditReport, Cache, CacheEntry, CACHE_ENV};
pub use report::{emit_report, parse_report, record_reports, Format, Report, Summary};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    P11,
    P12,
}

impl PropertyId {
    pub const ALL: [PropertyId; 12] = [
        PropertyId::P1,
        PropertyId::P2,
        PropertyId::P3,
        PropertyId::P4,
        PropertyId::P5,
        PropertyId::P6,
        PropertyId::P7,
        PropertyId::P8,
        PropertyId::P9,
        PropertyId::P10,
        PropertyId::P11,
        PropertyId::P12,
    ];

    /// The operations each property compares.
    pub fn describe(&self) -> &'static str {
        match self {
            PropertyId::P1 => "regular_orbit_count = |enumerate_cuspidals(zero)|",
            PropertyId::P2 => "reduce_mod_l and lifts partition the characteristic-zero cuspidals over the modular ones",
            PropertyId::P3 => "r from supercuspidal_support agrees with is_cuspidal_st (e * l^v) in both directions",
            PropertyId::P4 => "gl2 oracle invariant_dim and twisted_sign against parameter criteria and s_sign",
            PropertyId::P5 => "s_sign = milon_sign on st_u(rho), rho of order at most 2; s_sign commutes with reduction",
            PropertyId::P6 => "poulain_lift_decision and has_distinguished_lift against lift enumeration (unramified)",
            PropertyId::P7 => "poupin_lift_decision and has_distinguished_lift against lift enumeration (ramified)",
            PropertyId::P8 => "consistency_checks even-r-congruence: q^(n/2) = -1 mod l when r is even",
            PropertyId::P9 => "has_distinguished_lift or a lift from the oracle implies is_distinguished_level0 = yes",
            PropertyId::P10 => "not both distinguished and kappa-distinguished; thmodd_necessary soundness; dichotomy for r = 1",
            PropertyId::P11 => "consistency_checks selfdual-parity: m/r odd (unramified), even or 1 (ramified)",
            PropertyId::P12 => "twist bookkeeping: reduce_to_level0, twist_by_tame, compose_norm, mu_distinguished",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for PropertyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown property {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtKind {
    Ramified,
    Unramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub q0: Vec<u64>,
    pub n: Vec<u64>,
    pub ell: Vec<u64>,
    pub extensions: Vec<ExtKind>,
    pub oracle: bool,
    pub oracle_max_q: u64,
    pub threads: Option<usize>,
    pub exhaustive_limit: u64,
    pub properties: Vec<PropertyId>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            q0: vec![3, 5, 7, 9],
            n: (1..=6).collect(),
            ell: vec![2, 3, 5, 7, 13],
            extensions: vec![ExtKind::Ramified, ExtKind::Unramified],
            oracle: true,
            oracle_max_q: crate::gl2::DEFAULT_MAX_Q,
            threads: None,
            exhaustive_limit: 1 << 23,
            properties: PropertyId::ALL.to_vec(),
        }
    }
}

impl GridSpec {
    pub fn empty() -> Self {
        GridSpec { q0: Vec::new(), ..GridSpec::default() }
    }

    pub fn only(mut self, props: &[PropertyId]) -> Self {
        self.properties = props.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        for &q0 in &self.q0 {
            PrimePower::new(q0)?;
        }
        for &l in &self.ell {
            if !crate::arith::is_prime(l) {
                return Err(Error::NotPrime(l));
            }
        }
        if self.n.contains(&0) {
            return Err(Error::Precondition("n must be positive".into()));
        }
        Ok(())
    }

    fn extensions(&self) -> Vec<QuadResidueExt> {
        let mut out = BTreeSet::new();
        for &q0 in &self.q0 {
            for kind in &self.extensions {
                if let Ok(e) = QuadResidueExt::new(q0, *kind == ExtKind::Ramified) {
                    out.insert(e);
                }
            }
        }
        out.into_iter().collect()
    }

    fn residue_fields(&self) -> Vec<u64> {
        self.extensions().iter().map(|e| e.q()).collect::<BTreeSet<_>>().into_iter().collect()
    }

    fn ns(&self) -> Vec<u64> {
        self.n.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    fn ells_for(&self, q: u64) -> Vec<u64> {
        let p = PrimePower::new(q).map(|pp| pp.p).unwrap_or(0);
        self.ell.iter().copied().filter(|&l| l != p).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Every (property, cell) job, in report order.
    pub fn jobs(&self) -> Vec<(PropertyId, Cell)> {
        let props: BTreeSet<PropertyId> = self.properties.iter().copied().collect();
        let mut jobs = Vec::new();
        for p in props {
            for cell in self.cells_for(p) {
                jobs.push((p, cell));
            }
        }
        jobs
    }

    fn cells_for(&self, p: PropertyId) -> Vec<Cell> {
        use PropertyId::*;
        let mut out = Vec::new();
        match p {
            P1 | P2 | P3 | P5 => {
                for q in self.residue_fields() {
                    for n in self.ns() {
                        if p == P1 {
                            out.push(Cell { q, n, ell: None, ext: None });
                            continue;
                        }
                        if p == P5 && n % 2 == 1 {
                            continue;
                        }
                        for l in self.ells_for(q) {
                            out.push(Cell { q, n, ell: Some(l), ext: None });
                        }
                    }
                }
            }
            P4 => {
                if self.n.contains(&2) {
                    for ext in self.extensions() {
                        out.push(Cell { q: ext.q(), n: 2, ell: None, ext: Some(ext) });
                    }
                }
            }
            _ => {
                for ext in self.extensions() {
                    match p {
                        P6 if ext.ramified => continue,
                        P7 if !ext.ramified => continue,
                        _ => {}
                    }
                    for n in self.ns() {
                        if matches!(p, P10 | P11 | P12) {
                            out.push(Cell { q: ext.q(), n, ell: None, ext: Some(ext) });
                        }
                        for l in self.ells_for(ext.q()) {
                            if p == P8 && l == 2 {
                                continue;
                            }
                            out.push(Cell { q: ext.q(), n, ell: Some(l), ext: Some(ext) });
                        }
                    }
                }
            }
        }
        out
    }
}

/// One unit of work: a residue field (and possibly a quadratic extension), a rank and
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub q: u64,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<QuadResidueExt>,
}

impl Cell {
    pub fn coeff(&self) -> Coeff {
        self.ell.map(Coeff::Mod).unwrap_or(Coeff::Zero)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} n={}", self.q, self.n)?;
        if let Some(l) = self.ell {
            write!(f, " l={l}")?;
        }
        if let Some(e) = self.ext {
            write!(f, " {}(q0={})", if e.ramified { "ramified" } else { "unramified" }, e.q0)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub cell: Cell,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// Runs one property on one cell.
pub fn run_property(property: PropertyId, cell: &Cell, spec: &GridSpec) -> PropertyReport {
    properties::run(property, cell, spec)
}

pub fn run_battery(spec: &GridSpec) -> Vec<PropertyReport> {
    let jobs = spec.jobs();
    let work = || jobs.par_iter().map(|(p, c)| run_property(*p, c, spec)).collect::<Vec<_>>();
    match spec.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(work),
            Err(_) => jobs.iter().map(|(p, c)| run_property(*p, c, spec)).collect(),
        },
        None => work(),
    }
}

/// The least failing row for `property`, ordered by rank, then `l`, then field size.
pub fn minimal_failure(reports: &[PropertyReport], property: PropertyId) -> Option<&PropertyReport> {
    reports
        .iter()
        .filter(|r| r.property == property && r.status == Status::Fail)
        .min_by_key(|r| (r.cell.n, r.cell.ell.unwrap_or(0), r.cell.q, r.cell.ext))
}

/// One row of the comparison between distinction and the existence of a distinguished
/// lift for sigma-selfdual modular data with `r` even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub cell: Cell,
    pub distinguished: Verdict,
    pub lift: bool,
    pub count: u64,
}

pub fn conjecture_table(spec: &GridSpec) -> Result<Vec<ConjectureRow>> {
    let mut cells = Vec::new();
    for ext in spec.extensions() {
        for n in spec.ns().into_iter().filter(|n| n % 2 == 0) {
            for l in spec.ells_for(ext.q()) {
                cells.push(Cell { q: ext.q(), n, ell: Some(l), ext: Some(ext) });
            }
        }
    }
    let limit = spec.exhaustive_limit as u128;
    let per_cell: Vec<Result<Vec<ConjectureRow>>> = cells
        .par_iter()
        .map(|cell| {
            let ext = cell.ext.expect("cells carry extensions");
            let mut counts = std::collections::BTreeMap::new();
            let data = match padic::sigma_selfdual_data(&ext, cell.n, cell.coeff(), limit) {
                Err(Error::TooLarge { .. }) => return Ok(Vec::new()),
                other => other?,
            };
            for d in data {
                if !r_of(d.finite_param()).is_multiple_of(2) {
                    continue;
                }
                let v = is_distinguished_level0(&d)?.verdict;
                let lift = padic::has_distinguished_lift(&d)?.value;
                counts.entry((v as u8, lift)).or_insert((v, 0u64)).1 += 1;
            }
            Ok(counts
                .into_iter()
                .map(|((_, lift), (v, count))| ConjectureRow { cell: cell.clone(), distinguished: v, lift, count })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_cell {
        out.extend(rows?);
    }
    Ok(out)
}
