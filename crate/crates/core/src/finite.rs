//! Cuspidal representations of `GL_n(k)` through their parameters.
//!
//! A characteristic-zero cuspidal is the Frobenius orbit of a regular character
//! of `k_n^x`. A modular cuspidal is the orbit of a character of the prime-to-`l`
//! part that admits a regular lift. Everything here is decided on parameters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::angle::RationalAngle;
use crate::arith::{gcd, l_adic_split, mult_order, pow_mod, PrimePower};
use crate::character::{Coeff, CyclicCharacter};
use crate::error::{precondition, Error, Result};
use crate::verdict::{rules, Decision, Verdict};

/// Residue data of a quadratic extension `k/k_0`: `|k| = q0` when ramified, `q0^2` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawExt", into = "RawExt")]
pub struct QuadResidueExt {
    pub q0: u64,
    pub ramified: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExt {
    q0: u64,
    ramified: bool,
}

impl TryFrom<RawExt> for QuadResidueExt {
    type Error = Error;
    fn try_from(r: RawExt) -> Result<Self> {
        QuadResidueExt::new(r.q0, r.ramified)
    }
}

impl From<QuadResidueExt> for RawExt {
    fn from(e: QuadResidueExt) -> Self {
        RawExt { q0: e.q0, ramified: e.ramified }
    }
}

impl QuadResidueExt {
    pub fn new(q0: u64, ramified: bool) -> Result<Self> {
        PrimePower::new(q0)?;
        Ok(QuadResidueExt { q0, ramified })
    }

    pub fn ramified(q0: u64) -> Result<Self> {
        Self::new(q0, true)
    }

    pub fn unramified(q0: u64) -> Result<Self> {
        Self::new(q0, false)
    }

    pub fn q(&self) -> u64 {
        if self.ramified {
            self.q0
        } else {
            self.q0 * self.q0
        }
    }
}

/// A cuspidal representation, stored as the least exponent of its parameter orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CyclicCharacter", into = "CyclicCharacter")]
pub struct CuspidalRepFF {
    param: CyclicCharacter,
}

impl TryFrom<CyclicCharacter> for CuspidalRepFF {
    type Error = Error;
    fn try_from(c: CyclicCharacter) -> Result<Self> {
        CuspidalRepFF::new(c)
    }
}

impl From<CuspidalRepFF> for CyclicCharacter {
    fn from(w: CuspidalRepFF) -> Self {
        w.param
    }
}

impl CuspidalRepFF {
    pub fn new(param: CyclicCharacter) -> Result<Self> {
        let ok = match param.coeff() {
            Coeff::Zero => param.is_regular(),
            Coeff::Mod(_) => has_regular_lift(&param)?,
        };
        if !ok {
            return Err(Error::Invariant(format!(
                "exponent {} mod {} has no regular lift",
                param.exponent(),
                param.modulus()
            )));
        }
        Ok(CuspidalRepFF { param: param.canonical() })
    }

    pub fn from_exponent(q: u64, n: u64, coeff: Coeff, exponent: u128) -> Result<Self> {
        Self::new(CyclicCharacter::new(q, n, coeff, exponent)?)
    }

    pub fn param(&self) -> &CyclicCharacter {
        &self.param
    }
    pub fn q(&self) -> u64 {
        self.param.q()
    }
    pub fn n(&self) -> u64 {
        self.param.n()
    }
    pub fn coeff(&self) -> Coeff {
        self.param.coeff()
    }

    pub fn reduce_mod_l(&self, l: u64) -> Result<Self> {
        Self::new(self.param.reduce_mod_l(l)?)
    }

    pub fn is_supercuspidal(&self) -> bool {
        r_of(self) == 1
    }
}

pub fn has_regular_lift(x: &CyclicCharacter) -> Result<bool> {
    Ok(x.lifts()?.iter().any(|c| c.is_regular()))
}

/// `st_u(scusp)` with `u * f = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupercuspidalSupportFF {
    pub u: u64,
    pub f: u64,
    pub scusp: CuspidalRepFF,
}

/// Number of copies of the supercuspidal support.
pub fn r_of(w: &CuspidalRepFF) -> u64 {
    w.n() / w.param.orbit_size()
}

pub fn supercuspidal_support(w: &CuspidalRepFF) -> Result<SupercuspidalSupportFF> {
    let f = w.param.orbit_size();
    let u = w.n() / f;
    let theta = w
        .param
        .factor_through_norm(f)?
        .ok_or_else(|| Error::Invariant("parameter does not factor through its orbit field".into()))?;
    if !theta.is_regular() {
        return Err(Error::Invariant("support parameter is not regular".into()));
    }
    let scusp = CuspidalRepFF::new(theta)?;
    if scusp.param.inflate(u)?.canonical() != w.param {
        return Err(Error::Invariant("support does not inflate back to the parameter".into()));
    }
    Ok(SupercuspidalSupportFF { u, f, scusp })
}

/// Whether `st_u(rho)` is cuspidal in characteristic `l`, for supercuspidal `rho`.
pub fn is_cuspidal_st(rho: &CuspidalRepFF, u: u64, l: u64) -> Result<bool> {
    if r_of(rho) != 1 {
        return precondition("rho must be supercuspidal");
    }
    Coeff::Mod(l).validate(rho.q())?;
    if u == 1 {
        return Ok(true);
    }
    let qf = pow_mod(rho.q() as u128, rho.n() as u128, l as u128);
    let e = mult_order(qf, l as u128)? as u64;
    if !u.is_multiple_of(e) {
        return Ok(false);
    }
    let (_, rest) = l_adic_split((u / e) as u128, l);
    Ok(rest == 1)
}

fn check_ext(w: &CuspidalRepFF, ext: &QuadResidueExt) -> Result<()> {
    if ext.q() != w.q() {
        return precondition(format!("extension has residue field of size {}, representation {}", ext.q(), w.q()));
    }
    Ok(())
}

pub fn is_sigma_selfdual_ff(w: &CuspidalRepFF, ext: &QuadResidueExt) -> Result<bool> {
    check_ext(w, ext)?;
    Ok(w.param.same_orbit(&w.param.sigma_dual(ext)?))
}

/// Distinction by `GL_n(k_0)` (unramified) or `GL_u(k) x GL_(n-u)(k)` (ramified).
pub fn is_distinguished_ff(w: &CuspidalRepFF, ext: &QuadResidueExt) -> Result<Decision> {
    check_ext(w, ext)?;
    let n = w.n();
    let modular = w.coeff() != Coeff::Zero;
    if ext.ramified {
        if n == 1 {
            let v = if w.param.is_trivial() { Verdict::Yes } else { Verdict::No };
            return Ok(Decision::new(v, rules::CHARACTER_CASE));
        }
        if n % 2 == 1 {
            return Ok(Decision::new(Verdict::No, rules::ODD_RANK));
        }
        let trivial = w.param.is_trivial_on_subfield(n / 2)?;
        if !modular {
            let v = if trivial { Verdict::Yes } else { Verdict::No };
            return Ok(Decision::new(v, rules::LEVI_TRIVIAL));
        }
        if !trivial {
            return Ok(Decision::new(Verdict::No, rules::LEVI_MODULAR_NONTRIVIAL));
        }
    } else {
        if !is_sigma_selfdual_ff(w, ext)? {
            let rule = if modular { rules::SELFDUAL_NECESSARY } else { rules::GOW };
            return Ok(Decision::new(Verdict::No, rule));
        }
        if !modular {
            return Ok(Decision::new(Verdict::Yes, rules::GOW));
        }
        if w.is_supercuspidal() {
            return Ok(Decision::new(Verdict::Yes, rules::SUPERCUSPIDAL_SELFDUAL));
        }
    }
    if !enumerate_distinguished_lifts(w, ext)?.is_empty() {
        Ok(Decision::new(Verdict::Yes, rules::LIFT_REDUCTION))
    } else {
        Ok(Decision::new(Verdict::Unknown, rules::UNDECIDED))
    }
}

/// Sign of the block swap on `GL_u x GL_u`-invariant forms, as an angle in `{0, 1/2}`.
///
/// Requires `n = 2u` and a parameter trivial on `k_u^x`; the value is `-xi(alpha)` with
/// `alpha = g^((q^u+1)/2)`, read in the coefficient field of `w`.
pub fn s_sign(w: &CuspidalRepFF) -> Result<RationalAngle> {
    let n = w.n();
    if !n.is_multiple_of(2) {
        return precondition("the block swap sign needs even n");
    }
    let u = n / 2;
    if !w.param.is_trivial_on_subfield(u)? {
        return precondition("parameter is not trivial on k_u^x");
    }
    let qu = (w.q() as u128).pow(u as u32);
    let xi_alpha = w.param.value_angle(qu.div_ceil(2));
    Ok(RationalAngle::HALF.add(&xi_alpha).reduce(w.coeff()))
}

/// Sign for `st_n(rho)` with `rho` quadratic, from the closed formula.
pub fn milon_sign(w: &CuspidalRepFF) -> Result<RationalAngle> {
    let n = w.n();
    if !n.is_multiple_of(2) {
        return precondition("n must be even");
    }
    let support = supercuspidal_support(w)?;
    let rho = support.scusp.param();
    if support.f != 1 || !rho.pow(2).is_trivial() {
        return precondition("support must be a character of order at most 2");
    }
    let u = n / 2;
    let sign = if rho.is_trivial() {
        RationalAngle::HALF
    } else {
        RationalAngle::sign((u * (w.q() - 1) / 2) % 2 == 1)
    };
    Ok(sign.reduce(w.coeff()))
}

fn ell_of(w: &CuspidalRepFF) -> Result<u64> {
    w.coeff().ell().ok_or_else(|| Error::Precondition("modular representation expected".into()))
}

/// Existence of a `GL_n(k_0)`-distinguished lift, unramified case.
pub fn poulain_lift_decision(w: &CuspidalRepFF, ext: &QuadResidueExt) -> Result<bool> {
    let l = ell_of(w)?;
    if ext.ramified {
        return precondition("unramified extension expected");
    }
    if !is_sigma_selfdual_ff(w, ext)? {
        return Ok(false);
    }
    if w.n().is_multiple_of(2) {
        return Ok(false);
    }
    if w.is_supercuspidal() {
        return Ok(true);
    }
    Ok(mult_order(ext.q0 as u128 % l as u128, l as u128)? % 2 == 0)
}

/// Existence of a `GL_u x GL_(n-u)`-distinguished lift, ramified case.
///
/// For `n = 1` the answer is whether the character is trivial.
pub fn poupin_lift_decision(w: &CuspidalRepFF, ext: &QuadResidueExt) -> Result<bool> {
    let l = ell_of(w)?;
    if !ext.ramified {
        return precondition("ramified extension expected");
    }
    if !is_sigma_selfdual_ff(w, ext)? {
        return precondition("representation is not selfdual");
    }
    let n = w.n();
    if n == 1 {
        return Ok(w.param.is_trivial());
    }
    if n % 2 == 1 {
        return Ok(false);
    }
    let r = r_of(w);
    if r == 1 {
        return Ok(true);
    }
    let q = w.q();
    let e = mult_order(q as u128 % l as u128, l as u128)? as u64;
    if l != 2 {
        Ok((r % 2 == 1 && n.is_multiple_of(e) && (n / e) % 2 == 1) || r == n)
    } else {
        let rho_trivial = supercuspidal_support(w)?.scusp.param().is_trivial();
        Ok(n == 2 && r == 2 && q % 4 == 3 && rho_trivial)
    }
}

/// Characteristic-zero cuspidal lifts of `w` satisfying the distinction criterion for `ext`.
pub fn enumerate_distinguished_lifts(w: &CuspidalRepFF, ext: &QuadResidueExt) -> Result<Vec<CuspidalRepFF>> {
    check_ext(w, ext)?;
    let n = w.n();
    let mut out = BTreeSet::new();
    for xi in w.param.lifts()? {
        if !xi.is_regular() {
            continue;
        }
        let keep = if ext.ramified {
            match n {
                1 => xi.is_trivial(),
                _ if n % 2 == 1 => false,
                _ => xi.is_trivial_on_subfield(n / 2)?,
            }
        } else {
            xi.same_orbit(&xi.sigma_dual(ext)?)
        };
        if keep {
            out.insert(CuspidalRepFF::new(xi)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Every cuspidal of `GL_n(k)` with coefficients `coeff`, by exhaustive orbit scan.
pub fn enumerate_cuspidals(q: u64, n: u64, coeff: Coeff, limit: u128) -> Result<Vec<CuspidalRepFF>> {
    let modulus = CyclicCharacter::trivial(q, n, coeff)?.modulus();
    if modulus > limit {
        return Err(Error::TooLarge { modulus, limit });
    }
    let mut seen = vec![false; modulus as usize];
    let mut out = Vec::new();
    for e in 0..modulus {
        if seen[e as usize] {
            continue;
        }
        let chi = CyclicCharacter::new(q, n, coeff, e)?;
        let orbit = chi.frobenius_orbit();
        for &x in &orbit {
            seen[x as usize] = true;
        }
        let cuspidal = match coeff {
            Coeff::Zero => orbit.len() as u64 == n,
            Coeff::Mod(_) => has_regular_lift(&chi)?,
        };
        if cuspidal {
            out.push(CuspidalRepFF { param: chi });
        }
    }
    Ok(out)
}

/// All sigma-selfdual parameters of `k_n^x`, as canonical orbit representatives.
///
/// Solves `x (q^j - c) = 0` with `c` the sigma-dual multiplier, for each `j < n`.
pub fn sigma_selfdual_parameters(q: u64, n: u64, coeff: Coeff, ext: &QuadResidueExt, limit: u128) -> Result<Vec<CyclicCharacter>> {
    if ext.q() != q {
        return precondition("extension does not match q");
    }
    let trivial = CyclicCharacter::trivial(q, n, coeff)?;
    let m = trivial.modulus();
    let c = if ext.ramified { 1 } else { ext.q0 as u128 % m };
    let mut out = BTreeSet::new();
    let mut qj = 1 % m;
    for _ in 0..n {
        let g = gcd(m, (qj + c) % m);
        if g > limit {
            return Err(Error::TooLarge { modulus: g, limit });
        }
        let step = m / g;
        for t in 0..g {
            let chi = CyclicCharacter::new(q, n, coeff, t * step)?;
            out.insert(chi.canonical());
        }
        qj = crate::arith::mul_mod(qj, q as u128, m);
    }
    Ok(out.into_iter().collect())
}

/// Cuspidals among [`sigma_selfdual_parameters`].
pub fn sigma_selfdual_cuspidals(q: u64, n: u64, coeff: Coeff, ext: &QuadResidueExt, limit: u128) -> Result<Vec<CuspidalRepFF>> {
    let mut out = Vec::new();
    for chi in sigma_selfdual_parameters(q, n, coeff, ext, limit)? {
        let cusp = match coeff {
            Coeff::Zero => chi.is_regular(),
            Coeff::Mod(_) => has_regular_lift(&chi)?,
        };
        if cusp {
            out.push(CuspidalRepFF { param: chi });
        }
    }
    Ok(out)
}
