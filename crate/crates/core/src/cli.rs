//! Command-line front end. [`run`] parses arguments and returns the exit status with the
//! rendered output, so it can be driven from tests without a subprocess.
//!
//! Exit status: 0 success, 1 a property or certificate failed, 2 malformed input,
//! 3 an invariant of the input was violated.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::angle::RationalAngle;
use crate::arith::regular_orbit_count;
use crate::character::Coeff;
use crate::error::{Error, Result};
use crate::finite::{
    enumerate_cuspidals, enumerate_distinguished_lifts, poulain_lift_decision, poupin_lift_decision, r_of,
    CuspidalRepFF, QuadResidueExt,
};
use crate::gl2::{Gl2Oracle, DEFAULT_MAX_Q};
use crate::harness::{
    conjecture_table, emit_report, record_reports, run_battery, Cache, ExtKind, Format, GridSpec, PropertyId, Report,
};
use crate::padic::{
    classify, is_distinguished_level0, is_sigma_selfdual, reduce_to_level0, sigma_selfdual_data, thmodd_necessary_general,
    Classification, EndoInvariants, GeneralCuspidalDatum, LevelZeroCuspidalDatum,
};

#[derive(Debug, Parser)]
#[command(name = "cuspdist", version, about = "Distinction of cuspidal representations by Galois involutions")]
pub struct Invocation {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every verdict for one level-zero (or positive-level) datum.
    Classify(DatumArgs),
    /// Cuspidals of GL_n(k), or the sigma-selfdual level-zero data over an extension.
    Enumerate(EnumerateArgs),
    /// Run the property battery on a grid.
    Verify(VerifyArgs),
    /// Distinguished characteristic-zero lifts of a modular finite cuspidal.
    Lifts(DatumArgs),
    /// Certify the GL_2(F_q) cuspidal table.
    Oracle(OracleArgs),
}

/// A datum given by a JSON file or by flags named after the JSON fields.
#[derive(Debug, Args)]
pub struct DatumArgs {
    /// JSON file with the datum (`-` for standard input).
    #[arg(long, conflicts_with_all = ["q0", "ramified", "n", "l", "exponent", "central_angle"])]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub q0: Option<u64>,
    #[arg(long)]
    pub ramified: bool,
    #[arg(long)]
    pub n: Option<u64>,
    /// Characteristic of the coefficient field; omit for characteristic zero.
    #[arg(long, alias = "ell")]
    pub l: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub exponent: u128,
    #[arg(long = "central-angle", alias = "central_angle", default_value = "0")]
    pub central_angle: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Residue field size for a plain enumeration of cuspidals.
    #[arg(long, conflicts_with = "q0")]
    pub q: Option<u64>,
    /// Base residue field size: enumerate sigma-selfdual level-zero data instead.
    #[arg(long)]
    pub q0: Option<u64>,
    #[arg(long)]
    pub ramified: bool,
    #[arg(long)]
    pub n: u64,
    #[arg(long, alias = "ell")]
    pub l: Option<u64>,
    #[arg(long, default_value_t = 1 << 23)]
    pub limit: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// GridSpec JSON; the flags below override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub q0: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    #[arg(long, alias = "ell", value_delimiter = ',')]
    pub l: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',', value_enum)]
    pub extensions: Option<Vec<ExtArg>>,
    #[arg(long, value_delimiter = ',')]
    pub properties: Option<Vec<String>>,
    #[arg(long)]
    pub no_oracle: bool,
    #[arg(long)]
    pub oracle_max_q: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub exhaustive_limit: Option<u64>,
    /// Adds `meta.timestamp` (seconds since the epoch) to the report.
    #[arg(long)]
    pub timestamp: bool,
    /// Appends the comparison of distinction with lift existence for even r.
    #[arg(long)]
    pub compare: bool,
    /// Recompute every k-th cache entry and report mismatches.
    #[arg(long)]
    pub audit: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtArg {
    Ramified,
    Unramified,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_Q)]
    pub max_q: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }
    fn fail(stdout: String, why: String) -> Self {
        Outcome { code: 1, stdout, stderr: why }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Json(_) | Error::Angle(_) | Error::Io { .. } => 2,
        _ => 3,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&inv) {
        Ok(out) => out,
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn dispatch(inv: &Invocation) -> Result<Outcome> {
    match &inv.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lifts(a) => cmd_lifts(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Json(e.to_string()))
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Io { path: "<stdin>".into(), message: e.to_string() })?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}

// Input shapes: structure only, validated afterwards so that malformed documents and
// invariant violations are reported differently.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtShape {
    q0: u64,
    ramified: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffShape {
    Zero(String),
    Mod { l: u64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamShape {
    q: u64,
    n: u64,
    coeff: CoeffShape,
    exponent: u128,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelZeroShape {
    ext: ExtShape,
    n: u64,
    coeff: CoeffShape,
    finite_param: ParamShape,
    central_angle: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralShape {
    ext: ExtShape,
    endo: EndoInvariants,
    m: u64,
    avatar: LevelZeroShape,
}

fn coeff_of(c: &CoeffShape) -> Result<Coeff> {
    match c {
        CoeffShape::Zero(s) if s == "zero" => Ok(Coeff::Zero),
        CoeffShape::Zero(s) => Err(Error::Json(format!("unknown coefficient {s:?}"))),
        CoeffShape::Mod { l } => Ok(Coeff::Mod(*l)),
    }
}

fn build_level_zero(s: &LevelZeroShape) -> Result<LevelZeroCuspidalDatum> {
    let ext = QuadResidueExt::new(s.ext.q0, s.ext.ramified)?;
    let coeff = coeff_of(&s.coeff)?;
    let pc = coeff_of(&s.finite_param.coeff)?;
    pc.validate(s.finite_param.q)?;
    let w = CuspidalRepFF::from_exponent(s.finite_param.q, s.finite_param.n, pc, s.finite_param.exponent)?;
    let angle: RationalAngle = s.central_angle.parse()?;
    LevelZeroCuspidalDatum::new(ext, s.n, coeff, w, angle)
}

fn shape<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Json(e.to_string()))
}

enum Input {
    Level0(LevelZeroCuspidalDatum),
    General(GeneralCuspidalDatum),
}

/// Accepts a level-zero datum, a positive-level datum, or a previous `classify` output.
fn parse_datum(v: &Value) -> Result<Input> {
    let obj = v.as_object().ok_or_else(|| Error::Json("expected a JSON object".into()))?;
    if obj.contains_key("endo") {
        let g: GeneralShape = shape(v)?;
        let ext = QuadResidueExt::new(g.ext.q0, g.ext.ramified)?;
        let avatar = build_level_zero(&g.avatar)?;
        return Ok(Input::General(GeneralCuspidalDatum::new(ext, g.endo, g.m, avatar)?));
    }
    if let Some(inner) = obj.get("general").or_else(|| obj.get("datum")) {
        return parse_datum(inner);
    }
    Ok(Input::Level0(build_level_zero(&shape(v)?)?))
}

fn datum_from_args(a: &DatumArgs) -> Result<Input> {
    if let Some(path) = &a.file {
        return parse_datum(&parse_value(&read_input(path)?)?);
    }
    let q0 = a.q0.ok_or_else(|| Error::Json("missing --q0 (or --file)".into()))?;
    let n = a.n.ok_or_else(|| Error::Json("missing --n".into()))?;
    let ext = QuadResidueExt::new(q0, a.ramified)?;
    let coeff = a.l.map(Coeff::Mod).unwrap_or(Coeff::Zero);
    let angle: RationalAngle = a.central_angle.parse()?;
    coeff.validate(ext.q())?;
    let w = CuspidalRepFF::from_exponent(ext.q(), n, coeff, a.exponent)?;
    Ok(Input::Level0(LevelZeroCuspidalDatum::new(ext, n, coeff, w, angle)?))
}

fn coeff_label(c: Coeff) -> String {
    match c {
        Coeff::Zero => "0".into(),
        Coeff::Mod(l) => format!("F_{l}"),
    }
}

fn classification_table(c: &Classification) -> String {
    let d = &c.datum;
    let mut s = String::new();
    let ext = d.ext();
    let _ = writeln!(
        s,
        "datum            {} q0={} n={} coeff={} exponent={} central_angle={}",
        if ext.ramified { "ramified" } else { "unramified" },
        ext.q0,
        d.n(),
        coeff_label(d.coeff()),
        d.finite_param().param().exponent(),
        d.central_angle()
    );
    let _ = writeln!(s, "r                {}", c.r);
    let angles: Vec<String> = c.support.ambiguity.iter().map(|a| a.to_string()).collect();
    let _ = writeln!(
        s,
        "support          rank {} exponent {} angle {} ({:?}; all: {})",
        c.support.k,
        c.support.rho.finite_param().param().exponent(),
        c.support.rho.central_angle(),
        c.support.selected_by,
        angles.join(", ")
    );
    let _ = writeln!(s, "sigma-selfdual   {}", c.sigma_selfdual);
    let rules: Vec<&str> = c.distinguished.certificate.iter().map(|r| r.rule.as_str()).collect();
    let _ = writeln!(s, "distinguished    {:?} [{}]", c.distinguished.verdict, rules.join(", "));
    let _ = writeln!(s, "kappa-dist.      {:?}", c.kappa_distinguished.verdict);
    if let Some(t) = &c.thmodd {
        let _ = writeln!(s, "odd-r necessary  parity {} support {:?}", t.parity_ok, t.support_distinguished);
    }
    if let Some(l) = &c.lift {
        let _ = writeln!(s, "lift             {} {:?}", l.value, l.support_restriction);
    }
    for ch in &c.consistency {
        let _ = writeln!(s, "check            {} applicable={} pass={}", ch.name, ch.applicable, ch.pass);
    }
    s
}

fn cmd_classify(a: &DatumArgs) -> Result<Outcome> {
    let (c, general) = match datum_from_args(a)? {
        Input::Level0(d) => (classify(&d)?, None),
        Input::General(g) => {
            let c = classify(&reduce_to_level0(&g))?;
            let thmodd = if c.r % 2 == 1 && c.r > 1 { Some(thmodd_necessary_general(&g)?) } else { None };
            (c, Some((g, thmodd)))
        }
    };
    let mut cache = Cache::from_env().transpose()?;
    if let Some(cache) = cache.as_mut() {
        let cached = cache.classify(&c.datum)?;
        let fresh = serde_json::to_value(&c).map_err(|e| Error::Json(e.to_string()))?;
        if cached != fresh {
            return Err(Error::Invariant("cached verdicts differ from recomputation".into()));
        }
    }
    let text = match (a.format, general) {
        (OutputFormat::Table, None) => classification_table(&c),
        (OutputFormat::Table, Some((g, _))) => {
            let e = g.endo();
            format!(
                "general          n={} m={} degree={} f_T={} e_T={}\n{}",
                g.n(),
                g.m(),
                e.degree,
                e.f_t,
                e.e_t,
                classification_table(&c)
            )
        }
        (_, None) => to_json(&c)?,
        (_, Some((g, thmodd))) => to_json(&json!({ "general": g, "n": g.n(), "thmodd": thmodd, "level_zero": c }))?,
    };
    Ok(Outcome::ok(text))
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<Outcome> {
    let coeff = a.l.map(Coeff::Mod).unwrap_or(Coeff::Zero);
    let limit = a.limit as u128;
    if let Some(q0) = a.q0 {
        let ext = QuadResidueExt::new(q0, a.ramified)?;
        coeff.validate(ext.q())?;
        let mut rows = Vec::new();
        for d in sigma_selfdual_data(&ext, a.n, coeff, limit)? {
            let v = is_distinguished_level0(&d)?.verdict;
            rows.push(json!({
                "exponent": d.finite_param().param().exponent(),
                "central_angle": d.central_angle(),
                "r": r_of(d.finite_param()),
                "sigma_selfdual": is_sigma_selfdual(&d)?,
                "distinguished": v,
            }));
        }
        let doc = json!({ "ext": ext, "n": a.n, "coeff": coeff, "count": rows.len(), "data": rows });
        return Ok(Outcome::ok(match a.format {
            OutputFormat::Table => table_rows(&doc["data"], &["exponent", "central_angle", "r", "distinguished"]),
            _ => to_json(&doc)?,
        }));
    }
    let q = a.q.ok_or_else(|| Error::Json("missing --q or --q0".into()))?;
    coeff.validate(q)?;
    let list = enumerate_cuspidals(q, a.n, coeff, limit)?;
    let rows: Vec<Value> = list
        .iter()
        .map(|w| json!({ "exponent": w.param().exponent(), "r": r_of(w), "orbit": w.param().frobenius_orbit() }))
        .collect();
    let mut doc = json!({ "q": q, "n": a.n, "coeff": coeff, "count": rows.len(), "cuspidals": rows });
    if coeff == Coeff::Zero {
        doc["mobius_count"] = json!(regular_orbit_count(q, a.n)?);
    }
    Ok(Outcome::ok(match a.format {
        OutputFormat::Table => table_rows(&doc["cuspidals"], &["exponent", "r"]),
        _ => to_json(&doc)?,
    }))
}

fn table_rows(rows: &Value, cols: &[&str]) -> String {
    let mut s = cols.join("\t") + "\n";
    for r in rows.as_array().into_iter().flatten() {
        let cells: Vec<String> = cols
            .iter()
            .map(|c| match &r[*c] {
                Value::String(x) => x.clone(),
                other => other.to_string(),
            })
            .collect();
        s += &(cells.join("\t") + "\n");
    }
    s
}

fn grid_from_args(a: &VerifyArgs) -> Result<GridSpec> {
    let mut spec = match &a.spec {
        Some(p) => serde_json::from_value(parse_value(&read_input(p)?)?).map_err(|e| Error::Json(e.to_string()))?,
        None => GridSpec::default(),
    };
    if let Some(v) = &a.q0 {
        spec.q0 = v.clone();
    }
    if let Some(v) = &a.n {
        spec.n = v.clone();
    }
    if let Some(v) = &a.l {
        spec.ell = v.clone();
    }
    if let Some(v) = &a.extensions {
        spec.extensions =
            v.iter().map(|e| if *e == ExtArg::Ramified { ExtKind::Ramified } else { ExtKind::Unramified }).collect();
    }
    if let Some(v) = &a.properties {
        spec.properties = v.iter().map(|p| p.parse()).collect::<Result<_>>()?;
    }
    if a.no_oracle {
        spec.oracle = false;
    }
    if let Some(v) = a.oracle_max_q {
        spec.oracle_max_q = v;
    }
    if a.threads.is_some() {
        spec.threads = a.threads;
    }
    if let Some(v) = a.exhaustive_limit {
        spec.exhaustive_limit = v;
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let spec = grid_from_args(a)?;
    let rows = run_battery(&spec);
    let timestamp = a.timestamp.then(|| {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        secs.to_string()
    });
    let mut audit = None;
    if let Some(mut cache) = Cache::from_env().transpose()? {
        record_reports(&mut cache, &spec, &rows)?;
        if let Some(k) = a.audit {
            audit = Some(cache.audit(k)?);
        }
    }
    let report = Report::new(rows, Some(spec.clone()), timestamp);
    let mut text = match a.format {
        OutputFormat::Json => emit_report(&report, Format::Json)? + "\n",
        OutputFormat::Csv => emit_report(&report, Format::Csv)?,
        OutputFormat::Table => {
            let mut s = String::new();
            for (p, sum) in &report.summary {
                let _ = writeln!(s, "{p:<4} pass {:>4} fail {:>3} skipped {:>3}  {}", sum.pass, sum.fail, sum.skipped, p.describe());
            }
            s
        }
    };
    if a.compare {
        text += &to_json(&json!({ "even_r_comparison": conjecture_table(&spec)? }))?;
    }
    if let Some(au) = &audit {
        text += &to_json(&json!({ "cache_audit": au }))?;
        if !au.mismatches.is_empty() {
            return Ok(Outcome::fail(text, format!("{} cache entries disagree with recomputation\n", au.mismatches.len())));
        }
    }
    let failures = report.failures();
    if failures > 0 {
        let first = PropertyId::ALL
            .iter()
            .find_map(|p| crate::harness::minimal_failure(&report.rows, *p))
            .map(|r| format!("{} at {}", r.property, r.cell))
            .unwrap_or_default();
        return Ok(Outcome::fail(text, format!("{failures} failing rows; least: {first}\n")));
    }
    Ok(Outcome::ok(text))
}

fn cmd_lifts(a: &DatumArgs) -> Result<Outcome> {
    let d = match datum_from_args(a)? {
        Input::Level0(d) => d,
        Input::General(g) => reduce_to_level0(&g),
    };
    let w = d.finite_param();
    let ext = d.ext();
    let lifts = enumerate_distinguished_lifts(w, ext)?;
    let lemma = match d.coeff() {
        Coeff::Zero => None,
        Coeff::Mod(_) if !is_sigma_selfdual_ff_safe(w, ext) => None,
        Coeff::Mod(_) if ext.ramified => Some(poupin_lift_decision(w, ext)?),
        Coeff::Mod(_) => Some(poulain_lift_decision(w, ext)?),
    };
    let orbits: Vec<Value> =
        lifts.iter().map(|c| json!({ "exponent": c.param().exponent(), "orbit": c.param().frobenius_orbit() })).collect();
    let doc = json!({ "param": w, "ext": ext, "count": lifts.len(), "lifts": orbits, "lemma": lemma });
    Ok(Outcome::ok(match a.format {
        OutputFormat::Table => table_rows(&doc["lifts"], &["exponent", "orbit"]),
        _ => to_json(&doc)?,
    }))
}

fn is_sigma_selfdual_ff_safe(w: &CuspidalRepFF, ext: &QuadResidueExt) -> bool {
    crate::finite::is_sigma_selfdual_ff(w, ext).unwrap_or(false)
}

fn cmd_oracle(a: &OracleArgs) -> Result<Outcome> {
    let report = Gl2Oracle::new(a.q, a.max_q)?.full_report()?;
    let text = match a.format {
        OutputFormat::Table => {
            let mut s = format!("q={} P={} P'={}\n", report.q, report.p, report.p_prime);
            for i in &report.identities {
                let _ = writeln!(s, "{:<40} {}", i.name, if i.pass { "pass" } else { "FAIL" });
            }
            for e in &report.signs {
                let _ = writeln!(s, "theta {:<4} torus-distinguished, sign {:+}", e.theta, e.sign);
            }
            s
        }
        _ => to_json(&report)?,
    };
    if report.all_pass() {
        Ok(Outcome::ok(text))
    } else {
        Ok(Outcome::fail(text, "certificate identities failed\n".into()))
    }
}
