//! Cuspidal characters of `GL_2(F_q)` computed exactly in two prime fields `F_P`.
//!
//! The table is built from the classical class data and is only used after the
//! orthonormality, degree, cuspidality and elliptic-trace identities pass in both
//! contexts. Invariant dimensions and coset signs are sums over explicit matrices,
//! each matrix being classified from its characteristic polynomial.

pub mod field;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, pow_mod, PrimePower};
use crate::error::{precondition, Error, Result};
use field::FiniteField;

/// Largest `q` handled unless raised explicitly.
pub const DEFAULT_MAX_Q: u64 = 13;

/// Conjugacy class labels. Field elements are recorded by their logarithm to the
/// fixed generator `g` of `F_(q^2)^x`; `F_q^x` is the subgroup generated by `g^(q+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Central(u64),
    Unipotent(u64),
    Split(u64, u64),
    Elliptic(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2Class {
    pub label: ClassLabel,
    pub size: u64,
}

/// A prime `P = 1 mod (q^2 - 1)` above `|GL_2(F_q)|` and `zeta` of order `q^2 - 1` in `F_P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingContext {
    pub p: u64,
    pub zeta: u64,
}

impl SplittingContext {
    /// The `index`-th admissible prime, counting from zero.
    pub fn find(q: u64, index: usize) -> Result<Self> {
        let m = q * q - 1;
        let group = group_order(q);
        let mut found = 0;
        let mut p = (group / m) * m + 1;
        loop {
            if p > group && is_prime(p) {
                if found == index {
                    let zeta = element_of_order(p, m)?;
                    return Ok(SplittingContext { p, zeta });
                }
                found += 1;
            }
            p += m;
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a as u128, e as u128, self.p as u128) as u64
    }
    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
    pub fn from_int(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }
    /// Representative in `(-P/2, P/2]`.
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

fn element_of_order(p: u64, m: u64) -> Result<u64> {
    let primes: Vec<u64> = factorize(m as u128).into_iter().map(|(r, _)| r as u64).collect();
    for h in 2..p {
        let z = pow_mod(h as u128, ((p - 1) / m) as u128, p as u128) as u64;
        if primes.iter().all(|r| pow_mod(z as u128, (m / r) as u128, p as u128) != 1) {
            return Ok(z);
        }
    }
    Err(Error::Invariant(format!("no element of order {m} mod {p}")))
}

pub fn group_order(q: u64) -> u64 {
    (q * q - 1) * (q * q - q)
}

/// The four class families of `GL_2(F_q)`.
pub fn build_classes(q: u64) -> Result<Vec<Gl2Class>> {
    PrimePower::new(q)?;
    let m = q * q - 1;
    let units: Vec<u64> = (0..q - 1).map(|j| j * (q + 1)).collect();
    let mut out = Vec::new();
    for &z in &units {
        out.push(Gl2Class { label: ClassLabel::Central(z), size: 1 });
    }
    for &z in &units {
        out.push(Gl2Class { label: ClassLabel::Unipotent(z), size: q * q - 1 });
    }
    for (i, &a) in units.iter().enumerate() {
        for &b in &units[i + 1..] {
            out.push(Gl2Class { label: ClassLabel::Split(a, b), size: q * (q + 1) });
        }
    }
    for t in 0..m {
        if t % (q + 1) != 0 && t <= t * q % m {
            out.push(Gl2Class { label: ClassLabel::Elliptic(t), size: q * (q - 1) });
        }
    }
    Ok(out)
}

/// One cuspidal character: `theta` is the exponent of a regular character of
/// `F_(q^2)^x`, stored as the least of `{theta, q theta}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2CuspidalCharacter {
    pub q: u64,
    pub theta: u64,
    pub values: Vec<u64>,
}

/// Value of the cuspidal character attached to `theta` on a class, in `ctx`.
pub fn character_value(q: u64, theta: u64, label: ClassLabel, ctx: &SplittingContext) -> u64 {
    let th = |j: u64| ctx.pow(ctx.zeta, (theta as u128 * j as u128 % (q * q - 1) as u128) as u64);
    match label {
        ClassLabel::Central(z) => ctx.mul(ctx.from_int(q as i64 - 1), th(z)),
        ClassLabel::Unipotent(z) => ctx.neg(th(z)),
        ClassLabel::Split(..) => 0,
        ClassLabel::Elliptic(x) => ctx.neg(ctx.add(th(x), th(x * q))),
    }
}

pub fn regular_thetas(q: u64) -> Vec<u64> {
    let m = q * q - 1;
    (0..m).filter(|&t| t * q % m != t && t < t * q % m).collect()
}

pub fn build_cuspidal_table(q: u64, classes: &[Gl2Class], ctx: &SplittingContext) -> Vec<Gl2CuspidalCharacter> {
    regular_thetas(q)
        .into_iter()
        .map(|theta| Gl2CuspidalCharacter {
            q,
            theta,
            values: classes.iter().map(|c| character_value(q, theta, c.label, ctx)).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subgroup {
    DiagonalTorus,
    RationalForm(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub theta: u64,
    pub torus_dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignEntry {
    pub theta: u64,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub q: u64,
    #[serde(rename = "P")]
    pub p: u64,
    #[serde(rename = "P_prime")]
    pub p_prime: u64,
    pub identities: Vec<Identity>,
    pub dims: Vec<DimEntry>,
    pub signs: Vec<SignEntry>,
}

impl CertificateReport {
    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }
}

type Matrix = [[u32; 2]; 2];

/// Class tables of `GL_2(F_q)` in two splitting contexts.
#[derive(Debug, Clone)]
pub struct Gl2Oracle {
    q: u64,
    field: FiniteField,
    classes: Vec<Gl2Class>,
    index: HashMap<ClassLabel, usize>,
    contexts: [SplittingContext; 2],
    tables: [Vec<Gl2CuspidalCharacter>; 2],
    sqrt: Vec<u32>,
}

impl Gl2Oracle {
    /// Builds and certifies the table; refuses `q > max_q`.
    pub fn new(q: u64, max_q: u64) -> Result<Self> {
        let oracle = Self::build(q, max_q)?;
        let report = oracle.certify();
        if let Some(bad) = report.identities.iter().find(|i| !i.pass) {
            return Err(Error::Invariant(format!("oracle identity {} failed at q={q}", bad.name)));
        }
        Ok(oracle)
    }

    fn build(q: u64, max_q: u64) -> Result<Self> {
        if q > max_q {
            return precondition(format!("q={q} exceeds the oracle cap {max_q}"));
        }
        let pp = PrimePower::new(q)?;
        let field = FiniteField::new(pp.p as u32, 2 * pp.k)?;
        let classes = build_classes(q)?;
        let index = classes.iter().enumerate().map(|(i, c)| (c.label, i)).collect();
        let contexts = [SplittingContext::find(q, 0)?, SplittingContext::find(q, 1)?];
        let tables = [
            build_cuspidal_table(q, &classes, &contexts[0]),
            build_cuspidal_table(q, &classes, &contexts[1]),
        ];
        let mut sqrt = vec![u32::MAX; field.size() as usize];
        for x in field.elements() {
            let s = field.mul(x, x) as usize;
            if sqrt[s] == u32::MAX {
                sqrt[s] = x;
            }
        }
        Ok(Gl2Oracle { q, field, classes, index, contexts, tables, sqrt })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn classes(&self) -> &[Gl2Class] {
        &self.classes
    }
    pub fn contexts(&self) -> &[SplittingContext; 2] {
        &self.contexts
    }
    pub fn table(&self, ctx: usize) -> &[Gl2CuspidalCharacter] {
        &self.tables[ctx]
    }
    pub fn thetas(&self) -> Vec<u64> {
        self.tables[0].iter().map(|c| c.theta).collect()
    }

    fn m(&self) -> u64 {
        self.q * self.q - 1
    }

    /// Elements of `F_q` inside `F_(q^2)`.
    pub fn base_field(&self) -> Vec<u32> {
        self.subfield(self.q)
    }

    /// Elements of the subfield of size `s`, which must divide into `q^2`.
    fn subfield(&self, s: u64) -> Vec<u32> {
        let step = self.m() / (s - 1);
        let mut out = vec![0];
        out.extend((0..s - 1).map(|j| self.field.gen_pow(j * step)));
        out
    }

    fn canonical_elliptic(&self, t: u64) -> u64 {
        t.min(t * self.q % self.m())
    }

    /// Conjugacy class in `GL_2(F_q)` of a matrix with entries in `F_q`.
    pub fn classify(&self, a: &Matrix) -> Result<ClassLabel> {
        let f = &self.field;
        let tr = f.add(a[0][0], a[1][1]);
        let det = f.sub(f.mul(a[0][0], a[1][1]), f.mul(a[0][1], a[1][0]));
        if det == 0 {
            return precondition("singular matrix");
        }
        let two = f.from_int(2);
        let four = f.from_int(4);
        let disc = f.sub(f.mul(tr, tr), f.mul(four, det));
        let log = |x: u32| f.log(x).expect("nonzero");
        if disc == 0 {
            let z = f.div(tr, two).unwrap();
            let scalar = a[0][1] == 0 && a[1][0] == 0 && a[0][0] == a[1][1];
            return Ok(if scalar { ClassLabel::Central(log(z)) } else { ClassLabel::Unipotent(log(z)) });
        }
        let s = self.sqrt[disc as usize];
        if s == u32::MAX {
            return Err(Error::Invariant("discriminant without square root in F_(q^2)".into()));
        }
        let x = f.div(f.add(tr, s), two).unwrap();
        let y = f.div(f.sub(tr, s), two).unwrap();
        if f.pow(disc, (self.q - 1) / 2) == 1 {
            let (lx, ly) = (log(x), log(y));
            if lx % (self.q + 1) != 0 || ly % (self.q + 1) != 0 {
                return Err(Error::Invariant("split eigenvalues outside F_q".into()));
            }
            Ok(ClassLabel::Split(lx.min(ly), lx.max(ly)))
        } else {
            Ok(ClassLabel::Elliptic(self.canonical_elliptic(log(x))))
        }
    }

    fn class_index(&self, a: &Matrix) -> Result<usize> {
        let label = self.classify(a)?;
        self.index
            .get(&label)
            .copied()
            .ok_or_else(|| Error::Invariant(format!("unlisted class {label:?}")))
    }

    fn table_row(&self, ctx: usize, theta: u64) -> Result<&Gl2CuspidalCharacter> {
        let m = self.m();
        let t = theta % m;
        let canon = t.min(t * self.q % m);
        self.tables[ctx]
            .iter()
            .find(|c| c.theta == canon)
            .ok_or_else(|| Error::Precondition(format!("theta={theta} is not regular")))
    }

    fn subgroup_elements(&self, h: Subgroup) -> Result<Vec<Matrix>> {
        match h {
            Subgroup::DiagonalTorus => {
                let units: Vec<u32> = self.base_field().into_iter().filter(|&x| x != 0).collect();
                Ok(units.iter().flat_map(|&a| units.iter().map(move |&b| [[a, 0], [0, b]])).collect())
            }
            Subgroup::RationalForm(q0) => {
                if q0 * q0 != self.q {
                    return precondition(format!("q={} is not {q0}^2", self.q));
                }
                let sub = self.subfield(q0);
                let f = &self.field;
                let mut out = Vec::new();
                for &a in &sub {
                    for &b in &sub {
                        for &c in &sub {
                            for &d in &sub {
                                if f.sub(f.mul(a, d), f.mul(b, c)) != 0 {
                                    out.push([[a, b], [c, d]]);
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn average(&self, theta: u64, elements: &[Matrix]) -> Result<i64> {
        let mut lifted = [0i64; 2];
        for (k, ctx) in self.contexts.iter().enumerate() {
            let row = self.table_row(k, theta)?;
            let mut sum = 0;
            for a in elements {
                sum = ctx.add(sum, row.values[self.class_index(a)?]);
            }
            let avg = ctx.mul(sum, ctx.inv(ctx.from_int(elements.len() as i64)));
            lifted[k] = ctx.lift(avg);
        }
        if lifted[0] != lifted[1] {
            return Err(Error::Invariant(format!("contexts disagree: {} vs {}", lifted[0], lifted[1])));
        }
        Ok(lifted[0])
    }

    /// Dimension of the `H`-fixed vectors.
    pub fn invariant_dim(&self, theta: u64, h: Subgroup) -> Result<u64> {
        let d = self.average(theta, &self.subgroup_elements(h)?)?;
        u64::try_from(d).map_err(|_| Error::Invariant(format!("negative dimension {d}")))
    }

    /// Trace of the antidiagonal involution on the torus-fixed line, as `+1` or `-1`.
    pub fn twisted_sign(&self, theta: u64) -> Result<i64> {
        if self.invariant_dim(theta, Subgroup::DiagonalTorus)? != 1 {
            return precondition("character is not torus-distinguished");
        }
        let coset: Vec<Matrix> = self
            .subgroup_elements(Subgroup::DiagonalTorus)?
            .into_iter()
            .map(|d| [[0, d[1][1]], [d[0][0], 0]])
            .collect();
        let s = self.average(theta, &coset)?;
        if s != 1 && s != -1 {
            return Err(Error::Invariant(format!("twisted sum {s} is not a sign")));
        }
        Ok(s)
    }

    /// Runs every identity in both contexts.
    pub fn certify(&self) -> CertificateReport {
        let mut identities = Vec::new();
        let mut push = |name: &str, pass: bool| identities.push(Identity { name: name.into(), pass });
        let q = self.q;
        let families = 2 * (q - 1) + (q - 1) * (q - 2) / 2 + q * (q - 1) / 2;
        push("class-count", self.classes.len() as u64 == families);
        push("class-size-sum", self.classes.iter().map(|c| c.size).sum::<u64>() == group_order(q));
        push("class-sizes-by-enumeration", self.class_sizes_by_enumeration().unwrap_or(false));
        push("character-count", self.tables[0].len() as u64 == q * (q - 1) / 2);
        for (k, ctx) in self.contexts.iter().enumerate() {
            let tag = |s: &str| format!("{s}[P={}]", ctx.p);
            let ok_ctx = ctx.pow(ctx.zeta, self.m()) == 1 && ctx.p > group_order(q) && (ctx.p - 1) % self.m() == 0;
            push(&tag("context"), ok_ctx);
            push(&tag("orthonormality"), self.orthonormal(k));
            push(&tag("degree"), self.degrees(k));
            push(&tag("cuspidality"), self.cuspidal(k));
            push(&tag("elliptic-trace"), self.elliptic_trace(k));
        }
        CertificateReport {
            q,
            p: self.contexts[0].p,
            p_prime: self.contexts[1].p,
            identities,
            dims: Vec::new(),
            signs: Vec::new(),
        }
    }

    /// Certificate report with torus dimensions and coset signs filled in.
    pub fn full_report(&self) -> Result<CertificateReport> {
        let mut report = self.certify();
        for theta in self.thetas() {
            let d = self.invariant_dim(theta, Subgroup::DiagonalTorus)?;
            report.dims.push(DimEntry { theta, torus_dim: d });
            if d == 1 {
                report.signs.push(SignEntry { theta, sign: self.twisted_sign(theta)? });
            }
        }
        Ok(report)
    }

    fn class_sizes_by_enumeration(&self) -> Result<bool> {
        let fq = self.base_field();
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        let f = &self.field;
        for &a in &fq {
            for &b in &fq {
                for &c in &fq {
                    for &d in &fq {
                        if f.sub(f.mul(a, d), f.mul(b, c)) != 0 {
                            *counts.entry(self.class_index(&[[a, b], [c, d]])?).or_default() += 1;
                        }
                    }
                }
            }
        }
        Ok(counts.len() == self.classes.len()
            && counts.iter().all(|(&i, &n)| self.classes[i].size == n))
    }

    fn conj_values(&self, k: usize, theta: u64) -> Vec<u64> {
        let m = self.m();
        let ctx = &self.contexts[k];
        self.classes
            .iter()
            .map(|c| character_value(self.q, (m - theta % m) % m, c.label, ctx))
            .collect()
    }

    fn orthonormal(&self, k: usize) -> bool {
        let ctx = &self.contexts[k];
        let inv_g = ctx.inv(ctx.from_int(group_order(self.q) as i64));
        let sizes: Vec<u64> = self.classes.iter().map(|c| c.size % ctx.p).collect();
        let conj: Vec<Vec<u64>> = self.tables[k].iter().map(|c| self.conj_values(k, c.theta)).collect();
        for (i, chi) in self.tables[k].iter().enumerate() {
            for (j, psi) in conj.iter().enumerate().skip(i) {
                let mut s = 0;
                for c in 0..sizes.len() {
                    s = ctx.add(s, ctx.mul(sizes[c], ctx.mul(chi.values[c], psi[c])));
                }
                if ctx.mul(s, inv_g) != u64::from(i == j) {
                    return false;
                }
            }
        }
        true
    }

    fn degrees(&self, k: usize) -> bool {
        let ctx = &self.contexts[k];
        let one = self.index[&ClassLabel::Central(0)];
        self.tables[k].iter().all(|c| ctx.lift(c.values[one]) == self.q as i64 - 1)
    }

    /// Sum over the upper unipotent subgroup vanishes.
    fn cuspidal(&self, k: usize) -> bool {
        let ctx = &self.contexts[k];
        let units = self.base_field();
        let row_sum = |c: &Gl2CuspidalCharacter| -> Result<u64> {
            let mut s = 0;
            for &b in &units {
                s = ctx.add(s, c.values[self.class_index(&[[1, b], [0, 1]])?]);
            }
            Ok(s)
        };
        self.tables[k].iter().all(|c| row_sum(c) == Ok(0))
    }

    /// Elliptic values against `-(theta(x) + theta(x^q))` with `x^q` from field arithmetic.
    fn elliptic_trace(&self, k: usize) -> bool {
        let ctx = &self.contexts[k];
        let m = self.m();
        let f = &self.field;
        self.tables[k].iter().all(|chi| {
            self.classes.iter().zip(&chi.values).all(|(c, &v)| match c.label {
                ClassLabel::Elliptic(t) => {
                    let x = f.gen_pow(t);
                    let xq = f.pow(x, self.q);
                    let theta_of = |y: u32| {
                        ctx.pow(ctx.zeta, (chi.theta as u128 * f.log(y).unwrap() as u128 % m as u128) as u64)
                    };
                    v == ctx.neg(ctx.add(theta_of(x), theta_of(xq)))
                }
                _ => true,
            })
        })
    }
}

/// Certificate report for `q` under the default cap.
pub fn certify_table(q: u64) -> Result<CertificateReport> {
    Gl2Oracle::build(q, DEFAULT_MAX_Q)?.full_report()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_families() {
        for (q, n, total) in [(3, 8, 48), (5, 24, 480), (7, 48, 2016)] {
            let cl = build_classes(q).unwrap();
            assert_eq!(cl.len(), n);
            assert_eq!(cl.iter().map(|c| c.size).sum::<u64>(), total);
        }
    }

    #[test]
    fn first_context_for_q7() {
        let ctx = SplittingContext::find(7, 0).unwrap();
        assert_eq!(ctx.p, 2017);
        assert_eq!(ctx.pow(ctx.zeta, 48), 1);
        assert_ne!(ctx.pow(ctx.zeta, 24), 1);
        assert_ne!(ctx.pow(ctx.zeta, 16), 1);
        assert!(SplittingContext::find(7, 1).unwrap().p > 2017);
    }

    #[test]
    fn table_sizes() {
        for (q, n) in [(3, 3), (5, 10), (7, 21)] {
            let o = Gl2Oracle::new(q, DEFAULT_MAX_Q).unwrap();
            assert_eq!(o.table(0).len(), n);
        }
    }

    #[test]
    fn torus_dims_and_signs() {
        let o = Gl2Oracle::new(3, DEFAULT_MAX_Q).unwrap();
        assert_eq!(o.invariant_dim(2, Subgroup::DiagonalTorus).unwrap(), 1);
        assert_eq!(o.invariant_dim(1, Subgroup::DiagonalTorus).unwrap(), 0);
        assert_eq!(o.twisted_sign(2).unwrap(), 1);
        let o = Gl2Oracle::new(5, DEFAULT_MAX_Q).unwrap();
        assert_eq!(o.twisted_sign(4).unwrap(), 1);
        assert_eq!(o.twisted_sign(8).unwrap(), -1);
        assert!(o.twisted_sign(1).is_err());
    }

    #[test]
    fn rational_form_vanishes_q9() {
        let o = Gl2Oracle::new(9, DEFAULT_MAX_Q).unwrap();
        assert_eq!(o.thetas().len(), 36);
        for t in o.thetas() {
            assert_eq!(o.invariant_dim(t, Subgroup::RationalForm(3)).unwrap(), 0);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(Gl2Oracle::new(25, DEFAULT_MAX_Q), Err(Error::Precondition(_))));
    }
}
