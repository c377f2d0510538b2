//! Level-zero cuspidal representations of `GL_n(F)` and their distinction by `GL_n(F_0)`.
//!
//! A level-zero cuspidal is recorded by the finite cuspidal `V` of `GL_n(k)` it
//! induces from and the angle of its central character at the fixed uniformizer
//! `varpi` (in `F_0` when unramified, with `sigma(varpi) = -varpi` when ramified).
//! Positive-level cuspidals enter only through their invariants and their level-zero
//! avatar over the tame parameter field `T/T_0`.

use serde::{Deserialize, Serialize};

use crate::angle::RationalAngle;
use crate::arith::{gcd, inv_mod, mul_mod, mult_order, PrimePower};
use crate::character::{Coeff, CyclicCharacter};
use crate::error::{precondition, Error, Result};
use crate::finite::{
    self, enumerate_distinguished_lifts, is_distinguished_ff, is_sigma_selfdual_ff, r_of, s_sign,
    supercuspidal_support, CuspidalRepFF, QuadResidueExt,
};
use crate::verdict::{rules, Decision, Rule, Verdict};

/// Residue data of `F/F_0`; the top residue field has `q0` or `q0^2` elements.
pub type QuadExtension = QuadResidueExt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLevelZero", into = "RawLevelZero")]
pub struct LevelZeroCuspidalDatum {
    ext: QuadExtension,
    n: u64,
    coeff: Coeff,
    finite_param: CuspidalRepFF,
    central_angle: RationalAngle,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevelZero {
    ext: QuadExtension,
    n: u64,
    coeff: Coeff,
    finite_param: CuspidalRepFF,
    central_angle: RationalAngle,
}

impl TryFrom<RawLevelZero> for LevelZeroCuspidalDatum {
    type Error = Error;
    fn try_from(r: RawLevelZero) -> Result<Self> {
        LevelZeroCuspidalDatum::new(r.ext, r.n, r.coeff, r.finite_param, r.central_angle)
    }
}

impl From<LevelZeroCuspidalDatum> for RawLevelZero {
    fn from(d: LevelZeroCuspidalDatum) -> Self {
        RawLevelZero {
            ext: d.ext,
            n: d.n,
            coeff: d.coeff,
            finite_param: d.finite_param,
            central_angle: d.central_angle,
        }
    }
}

impl LevelZeroCuspidalDatum {
    pub fn new(
        ext: QuadExtension,
        n: u64,
        coeff: Coeff,
        finite_param: CuspidalRepFF,
        central_angle: RationalAngle,
    ) -> Result<Self> {
        coeff.validate(ext.q())?;
        if finite_param.q() != ext.q() {
            return precondition(format!("finite parameter over q={}, extension gives q={}", finite_param.q(), ext.q()));
        }
        if finite_param.n() != n {
            return precondition(format!("finite parameter has rank {}, datum {n}", finite_param.n()));
        }
        if finite_param.coeff() != coeff {
            return precondition("finite parameter and datum have different coefficients");
        }
        if !central_angle.admissible(coeff) {
            return Err(Error::Invariant(format!("central angle {central_angle} has denominator divisible by l")));
        }
        Ok(LevelZeroCuspidalDatum { ext, n, coeff, finite_param, central_angle })
    }

    /// Shorthand from a parameter exponent.
    pub fn from_parts(ext: QuadExtension, n: u64, coeff: Coeff, exponent: u128, angle: &str) -> Result<Self> {
        let w = CuspidalRepFF::from_exponent(ext.q(), n, coeff, exponent)?;
        Self::new(ext, n, coeff, w, angle.parse()?)
    }

    pub fn ext(&self) -> &QuadExtension {
        &self.ext
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn coeff(&self) -> Coeff {
        self.coeff
    }
    pub fn finite_param(&self) -> &CuspidalRepFF {
        &self.finite_param
    }
    pub fn central_angle(&self) -> RationalAngle {
        self.central_angle
    }
    pub fn q(&self) -> u64 {
        self.ext.q()
    }
}

/// A tamely ramified character: a character of the residue field and an angle at `varpi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TameCharacter {
    pub unit: CyclicCharacter,
    pub angle: RationalAngle,
}

impl TameCharacter {
    pub fn new(unit: CyclicCharacter, angle: RationalAngle) -> Result<Self> {
        if unit.n() != 1 {
            return precondition("unit part must be a character of the residue field");
        }
        if !angle.admissible(unit.coeff()) {
            return precondition("angle not admissible for the coefficients");
        }
        Ok(TameCharacter { unit, angle })
    }

    pub fn trivial(q: u64, coeff: Coeff) -> Result<Self> {
        Self::new(CyclicCharacter::trivial(q, 1, coeff)?, RationalAngle::ZERO)
    }

    pub fn q(&self) -> u64 {
        self.unit.q()
    }

    pub fn inverse(&self) -> Self {
        TameCharacter { unit: self.unit.inverse(), angle: self.angle.neg() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(TameCharacter { unit: self.unit.mul(&other.unit)?, angle: self.angle.add(&other.angle) })
    }

    pub fn is_trivial(&self) -> bool {
        self.unit.is_trivial() && self.angle.is_zero()
    }

    /// `self o N_{T/F}` for a tame `T/F` with residue degree `f_t` and ramification `e_t`,
    /// with uniformizers normalised by `N_{T/F}(varpi_T) = varpi_F^{f_t}`.
    pub fn compose_norm(&self, f_t: u64, e_t: u64) -> Result<Self> {
        let q_t = self.q().checked_pow(f_t as u32).ok_or(Error::Overflow { q: self.q(), n: f_t })?;
        let inflated = self.unit.inflate(f_t)?.pow(e_t as u128);
        let unit = CyclicCharacter::new(q_t, 1, self.unit.coeff(), inflated.exponent())?;
        Ok(TameCharacter { unit, angle: self.angle.scale(f_t as u128) })
    }

    /// Restriction to `F_0^x`, as a tame character of the base.
    pub fn restrict_to_base(&self, ext: &QuadExtension) -> Result<Self> {
        if self.q() != ext.q() {
            return precondition("character does not live on the top field");
        }
        if ext.ramified {
            return Ok(TameCharacter { unit: self.unit.clone(), angle: self.angle.scale(2) });
        }
        let a = self.unit.value_angle((ext.q0 + 1) as u128);
        let m0 = self.unit.coeff().visible((ext.q0 - 1) as u128);
        let unit = CyclicCharacter::new(ext.q0, 1, self.unit.coeff(), a.num() * (m0 / a.den()))?;
        Ok(TameCharacter { unit, angle: self.angle })
    }

    /// Some character of `F^x` whose restriction to `F_0^x` is `mu`.
    pub fn extend_from_base(mu: &TameCharacter, ext: &QuadExtension) -> Result<Self> {
        if mu.q() != ext.q0 {
            return precondition("character does not live on the base field");
        }
        let coeff = mu.unit.coeff();
        if ext.ramified {
            let angle = *mu
                .angle
                .roots(2, coeff)
                .first()
                .ok_or_else(|| Error::Invariant("no admissible square root of the angle".into()))?;
            return Self::new(mu.unit.clone(), angle);
        }
        let m = coeff.visible((ext.q() - 1) as u128);
        let m0 = coeff.visible((ext.q0 - 1) as u128);
        let target = mu.unit.exponent() * (m / m0) % m;
        let c = (ext.q0 + 1) as u128 % m;
        let d = gcd(c, m);
        if target.is_multiple_of(d) {
            let t = mul_mod(target / d, inv_mod(c / d, m / d)?, m / d);
            let cand = Self::new(CyclicCharacter::new(ext.q(), 1, coeff, t)?, mu.angle)?;
            if cand.restrict_to_base(ext)? == *mu {
                return Ok(cand);
            }
        }
        Err(Error::Invariant("no extension of the character".into()))
    }
}

/// The quadratic character of `F_0^x` with kernel the norms from `F^x`.
pub fn kappa(ext: &QuadExtension, coeff: Coeff) -> Result<TameCharacter> {
    let q0 = ext.q0;
    if ext.ramified {
        let legendre = CyclicCharacter::new(q0, 1, Coeff::Zero, ((q0 - 1) / 2) as u128)?;
        let unit = match coeff {
            Coeff::Zero => legendre,
            Coeff::Mod(l) => legendre.reduce_mod_l(l)?,
        };
        let angle = RationalAngle::sign(((q0 - 1) / 2) % 2 == 1).reduce(coeff);
        TameCharacter::new(unit, angle)
    } else {
        TameCharacter::new(CyclicCharacter::trivial(q0, 1, coeff)?, RationalAngle::HALF.reduce(coeff))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndoInvariants {
    pub degree: u64,
    pub f_t: u64,
    pub e_t: u64,
    pub wild_exponent: u32,
    pub t_ramified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGeneral", into = "RawGeneral")]
pub struct GeneralCuspidalDatum {
    ext: QuadExtension,
    endo: EndoInvariants,
    m: u64,
    avatar: LevelZeroCuspidalDatum,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeneral {
    ext: QuadExtension,
    endo: EndoInvariants,
    m: u64,
    avatar: LevelZeroCuspidalDatum,
}

impl TryFrom<RawGeneral> for GeneralCuspidalDatum {
    type Error = Error;
    fn try_from(r: RawGeneral) -> Result<Self> {
        GeneralCuspidalDatum::new(r.ext, r.endo, r.m, r.avatar)
    }
}

impl From<GeneralCuspidalDatum> for RawGeneral {
    fn from(g: GeneralCuspidalDatum) -> Self {
        RawGeneral { ext: g.ext, endo: g.endo, m: g.m, avatar: g.avatar }
    }
}

impl GeneralCuspidalDatum {
    pub fn new(ext: QuadExtension, endo: EndoInvariants, m: u64, avatar: LevelZeroCuspidalDatum) -> Result<Self> {
        let p = PrimePower::new(ext.q())?.p;
        let tame = endo.f_t * endo.e_t;
        let wild = p.checked_pow(endo.wild_exponent).ok_or(Error::Overflow { q: p, n: endo.wild_exponent as u64 })?;
        if tame == 0 || endo.degree != tame * wild {
            return precondition(format!("degree {} is not f_T e_T p^w", endo.degree));
        }
        if avatar.n != m {
            return precondition(format!("avatar has rank {}, relative degree is {m}", avatar.n));
        }
        if avatar.ext.ramified != endo.t_ramified {
            return precondition("avatar ramification disagrees with T/T_0");
        }
        let q_t = ext.q().checked_pow(endo.f_t as u32).ok_or(Error::Overflow { q: ext.q(), n: endo.f_t })?;
        if avatar.q() != q_t {
            return precondition(format!("avatar residue field has {} elements, expected {q_t}", avatar.q()));
        }
        Ok(GeneralCuspidalDatum { ext, endo, m, avatar })
    }

    /// The level-zero datum seen as its own avatar.
    pub fn level_zero(dat: LevelZeroCuspidalDatum) -> Self {
        let endo = EndoInvariants { degree: 1, f_t: 1, e_t: 1, wild_exponent: 0, t_ramified: dat.ext.ramified };
        GeneralCuspidalDatum { ext: dat.ext, endo, m: dat.n, avatar: dat }
    }

    pub fn n(&self) -> u64 {
        self.m * self.endo.degree
    }
    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn endo(&self) -> &EndoInvariants {
        &self.endo
    }
    pub fn ext(&self) -> &QuadExtension {
        &self.ext
    }

    /// Twist by a tame character of `F^x`.
    pub fn twist(&self, chi: &TameCharacter) -> Result<Self> {
        if chi.q() != self.ext.q() {
            return precondition("twisting character does not live on F");
        }
        let on_t = chi.compose_norm(self.endo.f_t, self.endo.e_t)?;
        Ok(GeneralCuspidalDatum { avatar: twist_by_tame(&self.avatar, &on_t)?, ..self.clone() })
    }
}

pub fn reduce_to_level0(g: &GeneralCuspidalDatum) -> LevelZeroCuspidalDatum {
    g.avatar.clone()
}

/// `pi (chi o det)`.
pub fn twist_by_tame(dat: &LevelZeroCuspidalDatum, chi: &TameCharacter) -> Result<LevelZeroCuspidalDatum> {
    if chi.q() != dat.q() || chi.unit.coeff() != dat.coeff {
        return precondition("twisting character does not match the datum");
    }
    let shift = chi.unit.inflate(dat.n)?;
    let param = dat.finite_param.param().mul(&shift)?;
    let finite_param = CuspidalRepFF::new(param)?;
    let central_angle = dat.central_angle.add(&chi.angle.scale(dat.n as u128));
    LevelZeroCuspidalDatum::new(dat.ext, dat.n, dat.coeff, finite_param, central_angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportSelection {
    Unique,
    SigmaSelfdual,
    Least,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupercuspidalSupportDatum {
    pub r: u64,
    pub k: u64,
    pub rho: LevelZeroCuspidalDatum,
    pub ambiguity: Vec<RationalAngle>,
    pub selected_by: SupportSelection,
}

impl SupercuspidalSupportDatum {
    /// The support with each admissible central angle.
    pub fn members(&self) -> Result<Vec<LevelZeroCuspidalDatum>> {
        self.ambiguity
            .iter()
            .map(|a| {
                LevelZeroCuspidalDatum::new(self.rho.ext, self.k, self.rho.coeff, self.rho.finite_param.clone(), *a)
            })
            .collect()
    }
}

pub fn r_and_support(dat: &LevelZeroCuspidalDatum) -> Result<SupercuspidalSupportDatum> {
    let w = &dat.finite_param;
    let ff = supercuspidal_support(w)?;
    let r = ff.u;
    let roots = dat.central_angle.roots(r as u128, dat.coeff);
    if roots.is_empty() {
        return Err(Error::Invariant(format!("no admissible {r}-th root of {}", dat.central_angle)));
    }
    let members: Vec<LevelZeroCuspidalDatum> = roots
        .iter()
        .map(|a| LevelZeroCuspidalDatum::new(dat.ext, ff.f, dat.coeff, ff.scusp.clone(), *a))
        .collect::<Result<_>>()?;
    let two = dat.coeff == Coeff::Mod(2);
    let (rho, selected_by) = if r == 1 {
        (members[0].clone(), SupportSelection::Unique)
    } else if (r % 2 == 1 || two) && is_sigma_selfdual(dat)? {
        let sd: Vec<&LevelZeroCuspidalDatum> =
            members.iter().filter(|m| is_sigma_selfdual(m).unwrap_or(false)).collect();
        if sd.len() != 1 {
            return Err(Error::Invariant(format!("{} sigma-selfdual support members, expected one", sd.len())));
        }
        (sd[0].clone(), SupportSelection::SigmaSelfdual)
    } else {
        (members[0].clone(), SupportSelection::Least)
    };
    Ok(SupercuspidalSupportDatum { r, k: ff.f, rho, ambiguity: roots, selected_by })
}

/// Angle of the central character at `-1`.
fn angle_at_minus_one(dat: &LevelZeroCuspidalDatum) -> RationalAngle {
    let p = dat.finite_param.param();
    p.value_angle(p.group_order() / 2)
}

pub fn is_sigma_selfdual(dat: &LevelZeroCuspidalDatum) -> Result<bool> {
    if !is_sigma_selfdual_ff(&dat.finite_param, &dat.ext)? {
        return Ok(false);
    }
    let twice = dat.central_angle.scale(2);
    Ok(if dat.ext.ramified { twice.add(&angle_at_minus_one(dat)).is_zero() } else { twice.is_zero() })
}

/// Whether `c_pi` is trivial on `F_0^x`.
pub fn central_trivial_on_base(dat: &LevelZeroCuspidalDatum) -> Result<bool> {
    let p = dat.finite_param.param();
    if dat.ext.ramified {
        Ok(dat.central_angle.scale(2).is_zero() && p.trivial_on_subgroup((dat.q() - 1) as u128)?)
    } else {
        Ok(dat.central_angle.is_zero() && p.trivial_on_subgroup((dat.ext.q0 - 1) as u128)?)
    }
}

pub fn is_distinguished_level0(dat: &LevelZeroCuspidalDatum) -> Result<Decision> {
    if !central_trivial_on_base(dat)? {
        return Ok(Decision::new(Verdict::No, rules::CENTRAL));
    }
    if dat.n == 1 {
        return Ok(Decision::new(Verdict::Yes, rules::CENTRAL).then(rules::CHARACTER_CASE));
    }
    let fin = is_distinguished_ff(&dat.finite_param, &dat.ext)?;
    let head = Decision { verdict: Verdict::Yes, certificate: vec![rules::CENTRAL.into()] };
    if !dat.ext.ramified || fin.verdict != Verdict::Yes {
        return Ok(Decision { verdict: fin.verdict, certificate: fin.certificate }.after(&head));
    }
    let sign = s_sign(&dat.finite_param)?;
    let rule = if sign == dat.central_angle { rules::SIGN_MATCH } else { rules::SIGN_MISMATCH };
    let v = if sign == dat.central_angle { Verdict::Yes } else { Verdict::No };
    Ok(Decision { verdict: v, certificate: fin.certificate }.after(&head).then(rule))
}

pub fn mu_distinguished(dat: &LevelZeroCuspidalDatum, mu: &TameCharacter) -> Result<Decision> {
    let chi = TameCharacter::extend_from_base(mu, &dat.ext)?;
    let twisted = twist_by_tame(dat, &chi.inverse())?;
    let d = is_distinguished_level0(&twisted)?;
    Ok(d.after(&Decision { verdict: Verdict::Yes, certificate: vec![rules::TWIST.into()] }))
}

pub fn kappa_distinguished(dat: &LevelZeroCuspidalDatum) -> Result<Decision> {
    mu_distinguished(dat, &kappa(&dat.ext, dat.coeff)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThmOddReport {
    pub r: u64,
    pub parity_ok: bool,
    pub support_distinguished: Verdict,
}

impl ThmOddReport {
    pub fn both_pass(&self) -> bool {
        self.parity_ok && self.support_distinguished == Verdict::Yes
    }
}

/// Necessary conditions for distinction when `r` is odd and greater than one.
pub fn thmodd_necessary(dat: &LevelZeroCuspidalDatum) -> Result<ThmOddReport> {
    let support = r_and_support(dat)?;
    let r = support.r;
    if r % 2 == 0 || r == 1 {
        return precondition(format!("r = {r} is not odd and greater than one"));
    }
    let m = dat.n;
    let parity_ok = if dat.ext.ramified { m.is_multiple_of(2) } else { m % 2 == 1 };
    let support_distinguished = is_distinguished_level0(&support.rho)?.verdict;
    Ok(ThmOddReport { r, parity_ok, support_distinguished })
}

pub fn thmodd_necessary_general(g: &GeneralCuspidalDatum) -> Result<ThmOddReport> {
    thmodd_necessary(&g.avatar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    Kappa,
    Nu0Inverse,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDecision {
    pub value: bool,
    pub certificate: Vec<Rule>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub support_restriction: Option<Restriction>,
}

/// Restriction to `F_0^x` of a tame character of `F^x` (ramified case), compared with
/// `kappa` and `nu_0^{-1}`.
pub fn classify_restriction(unit: &CyclicCharacter, angle: RationalAngle, ext: &QuadExtension) -> Result<Restriction> {
    if !ext.ramified || unit.n() != 1 {
        return precondition("ramified extension and a character of k^x expected");
    }
    let coeff = unit.coeff();
    let at_varpi0 = angle.scale(2);
    let k = kappa(ext, coeff)?;
    if *unit == k.unit && at_varpi0 == k.angle {
        return Ok(Restriction::Kappa);
    }
    if let Coeff::Mod(l) = coeff {
        if unit.is_trivial() && at_varpi0 == RationalAngle::of_prime_field(ext.q0 % l, l)? {
            return Ok(Restriction::Nu0Inverse);
        }
    }
    Ok(Restriction::Neither)
}

const LIFT_SUPERCUSPIDAL: crate::verdict::RuleId =
    crate::verdict::RuleId("lift-supercuspidal", "a distinguished supercuspidal has a distinguished lift");
const LIFT_ODD: crate::verdict::RuleId = crate::verdict::RuleId(
    "lift-odd-r",
    "r odd: distinguished support and e_0 even (unramified) or m even with m/e odd (ramified)",
);
const LIFT_EVEN: crate::verdict::RuleId = crate::verdict::RuleId(
    "lift-even-r",
    "r even: ramified, m = r, support restricted to F_0^x is kappa or nu_0^-1 (l odd); l = 2 needs m = 2 and q_0 = -1 mod 4",
);

/// Whether a sigma-selfdual modular datum has a distinguished characteristic-zero lift.
pub fn has_distinguished_lift(dat: &LevelZeroCuspidalDatum) -> Result<LiftDecision> {
    let Coeff::Mod(l) = dat.coeff else {
        return precondition("modular datum expected");
    };
    if !is_sigma_selfdual(dat)? {
        return precondition("datum is not sigma-selfdual");
    }
    let support = r_and_support(dat)?;
    let r = support.r;
    let m = dat.n;
    let q = dat.q();
    if r == 1 {
        let d = is_distinguished_level0(dat)?;
        let mut certificate = d.certificate;
        certificate.push(LIFT_SUPERCUSPIDAL.into());
        return Ok(LiftDecision { value: d.verdict == Verdict::Yes, certificate, support_restriction: None });
    }
    let support_dist = is_distinguished_level0(&support.rho)?.verdict == Verdict::Yes;
    if r % 2 == 1 {
        let cond = if dat.ext.ramified {
            let e = mult_order((q % l) as u128, l as u128)? as u64;
            m.is_multiple_of(2) && m.is_multiple_of(e) && (m / e) % 2 == 1
        } else {
            mult_order((dat.ext.q0 % l) as u128, l as u128)? % 2 == 0
        };
        return Ok(LiftDecision { value: support_dist && cond, certificate: vec![LIFT_ODD.into()], support_restriction: None });
    }
    let certificate = vec![LIFT_EVEN.into()];
    if !dat.ext.ramified || m != r {
        return Ok(LiftDecision { value: false, certificate, support_restriction: None });
    }
    if l == 2 {
        let value = m == 2 && dat.ext.q0 % 4 == 3 && support_dist;
        return Ok(LiftDecision { value, certificate, support_restriction: None });
    }
    let unit = support.rho.finite_param.param();
    let mut found = Restriction::Neither;
    for a in &support.ambiguity {
        let res = classify_restriction(unit, *a, &dat.ext)?;
        if res != Restriction::Neither {
            found = res;
            break;
        }
    }
    Ok(LiftDecision { value: found != Restriction::Neither, certificate, support_restriction: Some(found) })
}

/// Characteristic-zero lifts `V~` of `V` for which some lift of `pi` with inducing datum
/// `V~` is distinguished: `V~` distinguished and the central sign condition at `varpi`.
pub fn distinguished_lift_oracle(dat: &LevelZeroCuspidalDatum) -> Result<Vec<CuspidalRepFF>> {
    let w = &dat.finite_param;
    let a = dat.central_angle;
    if !dat.ext.ramified {
        if !a.is_zero() {
            return Ok(Vec::new());
        }
        return enumerate_distinguished_lifts(w, &dat.ext);
    }
    if dat.n == 1 {
        let signs = [RationalAngle::ZERO, RationalAngle::HALF.reduce(dat.coeff)];
        if w.param().is_trivial() && signs.contains(&a) {
            return Ok(vec![CuspidalRepFF::from_exponent(dat.q(), 1, Coeff::Zero, 0)?]);
        }
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for lift in enumerate_distinguished_lifts(w, &dat.ext)? {
        if s_sign(&lift)?.reduce(dat.coeff) == a {
            out.push(lift);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub applicable: bool,
    pub pass: bool,
}

pub fn consistency_checks(dat: &LevelZeroCuspidalDatum) -> Result<Vec<Check>> {
    let r = r_of(&dat.finite_param);
    let n = dat.n;
    let mut out = Vec::new();
    let applies = matches!(dat.coeff, Coeff::Mod(l) if l != 2) && r >= 2 && r.is_multiple_of(2);
    let pass = match dat.coeff {
        Coeff::Mod(l) if applies => {
            crate::arith::pow_mod(dat.q() as u128, (n / 2) as u128, l as u128) == (l - 1) as u128
        }
        _ => true,
    };
    out.push(Check { name: "even-r-congruence".into(), applicable: applies, pass });
    let selfdual = is_sigma_selfdual(dat)?;
    let k = n / r;
    let pass = !selfdual || if dat.ext.ramified { k.is_multiple_of(2) || k == 1 } else { k % 2 == 1 };
    out.push(Check { name: "selfdual-parity".into(), applicable: selfdual, pass });
    Ok(out)
}

/// Every verdict for one datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub datum: LevelZeroCuspidalDatum,
    pub r: u64,
    pub support: SupercuspidalSupportDatum,
    pub sigma_selfdual: bool,
    pub distinguished: Decision,
    pub kappa_distinguished: Decision,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub thmodd: Option<ThmOddReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lift: Option<LiftDecision>,
    pub consistency: Vec<Check>,
}

pub fn classify(dat: &LevelZeroCuspidalDatum) -> Result<Classification> {
    let support = r_and_support(dat)?;
    let r = support.r;
    let sigma_selfdual = is_sigma_selfdual(dat)?;
    let thmodd = if r % 2 == 1 && r > 1 { Some(thmodd_necessary(dat)?) } else { None };
    let lift = if dat.coeff != Coeff::Zero && sigma_selfdual { Some(has_distinguished_lift(dat)?) } else { None };
    Ok(Classification {
        datum: dat.clone(),
        r,
        support,
        sigma_selfdual,
        distinguished: is_distinguished_level0(dat)?,
        kappa_distinguished: kappa_distinguished(dat)?,
        thmodd,
        lift,
        consistency: consistency_checks(dat)?,
    })
}

/// All sigma-selfdual level-zero data with the given residue data and rank.
pub fn sigma_selfdual_data(ext: &QuadExtension, n: u64, coeff: Coeff, limit: u128) -> Result<Vec<LevelZeroCuspidalDatum>> {
    let mut out = Vec::new();
    for w in finite::sigma_selfdual_cuspidals(ext.q(), n, coeff, ext, limit)? {
        let base = LevelZeroCuspidalDatum::new(*ext, n, coeff, w, RationalAngle::ZERO)?;
        let target = if ext.ramified { angle_at_minus_one(&base).neg() } else { RationalAngle::ZERO };
        for a in target.roots(2, coeff) {
            let d = LevelZeroCuspidalDatum { central_angle: a, ..base.clone() };
            if is_sigma_selfdual(&d)? {
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ram(q0: u64) -> QuadExtension {
        QuadExtension::ramified(q0).unwrap()
    }

    fn worked() -> LevelZeroCuspidalDatum {
        LevelZeroCuspidalDatum::from_parts(ram(3), 4, Coeff::Mod(5), 0, "1/2").unwrap()
    }

    #[test]
    fn worked_instance() {
        let d = worked();
        let s = r_and_support(&d).unwrap();
        assert_eq!(s.r, 4);
        assert_eq!(s.rho.central_angle().to_string(), "1/8");
        assert_eq!(s.ambiguity.len(), 4);
        assert!(is_sigma_selfdual(&d).unwrap());
        assert_eq!(is_distinguished_level0(&d).unwrap().verdict, Verdict::Yes);
        let lift = has_distinguished_lift(&d).unwrap();
        assert!(lift.value);
        assert_eq!(lift.support_restriction, Some(Restriction::Nu0Inverse));
        let oracle = distinguished_lift_oracle(&d).unwrap();
        assert_eq!(oracle.len(), 1);
        let checks = consistency_checks(&d).unwrap();
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn sign_comparison_both_ways() {
        let yes = LevelZeroCuspidalDatum::from_parts(ram(3), 2, Coeff::Zero, 2, "0").unwrap();
        let no = LevelZeroCuspidalDatum::from_parts(ram(3), 2, Coeff::Zero, 2, "1/2").unwrap();
        assert_eq!(is_distinguished_level0(&yes).unwrap().verdict, Verdict::Yes);
        assert_eq!(is_distinguished_level0(&no).unwrap().verdict, Verdict::No);
        assert!(is_sigma_selfdual(&no).unwrap());
        let bad = LevelZeroCuspidalDatum::from_parts(ram(3), 2, Coeff::Zero, 1, "0").unwrap();
        assert!(!is_sigma_selfdual(&bad).unwrap());
    }

    #[test]
    fn twist_example() {
        let d = LevelZeroCuspidalDatum::from_parts(ram(3), 2, Coeff::Zero, 2, "0").unwrap();
        let chi = TameCharacter::new(CyclicCharacter::new(3, 1, Coeff::Zero, 1).unwrap(), "1/4".parse().unwrap()).unwrap();
        let t = twist_by_tame(&d, &chi).unwrap();
        assert_eq!(t.finite_param().param().exponent(), 2 + 4 - 4);
        assert_eq!(t.central_angle(), RationalAngle::HALF);
        assert_eq!(twist_by_tame(&t, &chi.inverse()).unwrap(), d);
    }

    #[test]
    fn ell_two_lift() {
        let d = LevelZeroCuspidalDatum::from_parts(ram(3), 2, Coeff::Mod(2), 0, "0").unwrap();
        let s = r_and_support(&d).unwrap();
        assert_eq!(s.r, 2);
        assert_eq!(s.selected_by, SupportSelection::SigmaSelfdual);
        assert!(has_distinguished_lift(&d).unwrap().value);
        assert!(!distinguished_lift_oracle(&d).unwrap().is_empty());
    }

    #[test]
    fn thmodd_examples() {
        // ramified q=3, l=13: e = 3
        let ext = ram(3);
        let found = sigma_selfdual_data(&ext, 6, Coeff::Mod(13), 1 << 22)
            .unwrap()
            .into_iter()
            .find(|d| r_of(d.finite_param()) == 3)
            .expect("an r = 3 datum");
        let rep = thmodd_necessary(&found).unwrap();
        assert!(rep.parity_ok);
        assert!(!has_distinguished_lift(&found).unwrap().value);

        let unr = QuadExtension::unramified(3).unwrap();
        let found = sigma_selfdual_data(&unr, 3, Coeff::Mod(7), 1 << 22)
            .unwrap()
            .into_iter()
            .find(|d| r_of(d.finite_param()) == 3)
            .expect("an r = 3 datum");
        assert!(thmodd_necessary(&found).unwrap().parity_ok);
        assert!(consistency_checks(&found).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn general_bookkeeping() {
        let unr = QuadExtension::unramified(3).unwrap();
        let avatar_ext = QuadExtension::unramified(9).unwrap();
        let w = finite::sigma_selfdual_cuspidals(81, 3, Coeff::Zero, &avatar_ext, 1 << 22).unwrap();
        let avatar = LevelZeroCuspidalDatum::new(avatar_ext, 3, Coeff::Zero, w[0].clone(), RationalAngle::ZERO).unwrap();
        let endo = EndoInvariants { degree: 2, f_t: 2, e_t: 1, wild_exponent: 0, t_ramified: false };
        let g = GeneralCuspidalDatum::new(unr, endo, 3, avatar.clone()).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(reduce_to_level0(&g), avatar);
        let bad = EndoInvariants { degree: 3, ..endo };
        assert!(GeneralCuspidalDatum::new(unr, bad, 3, avatar).is_err());
    }

    #[test]
    fn kappa_shapes() {
        let k = kappa(&ram(3), Coeff::Zero).unwrap();
        assert_eq!((k.unit.exponent(), k.angle), (1, RationalAngle::HALF));
        let k = kappa(&ram(5), Coeff::Zero).unwrap();
        assert_eq!((k.unit.exponent(), k.angle), (2, RationalAngle::ZERO));
        let k = kappa(&QuadExtension::unramified(3).unwrap(), Coeff::Mod(2)).unwrap();
        assert!(k.is_trivial());
    }

    #[test]
    fn extension_restricts_back() {
        for ext in [ram(5), QuadExtension::unramified(3).unwrap()] {
            for coeff in [Coeff::Zero, Coeff::Mod(7)] {
                let mu = kappa(&ext, coeff).unwrap();
                let chi = TameCharacter::extend_from_base(&mu, &ext).unwrap();
                assert_eq!(chi.restrict_to_base(&ext).unwrap(), mu);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = worked();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<LevelZeroCuspidalDatum>(&s).unwrap(), d);
        assert!(s.contains(r#""central_angle":"1/2""#));
    }
}
