use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{Cell, GridSpec, PropertyId, PropertyReport, Status};
use crate::angle::RationalAngle;
use crate::arith::{divisors, pow_mod, regular_orbit_count, PrimePower};
use crate::character::{Coeff, CyclicCharacter};
use crate::error::{Error, Result};
use crate::finite::{
    enumerate_cuspidals, enumerate_distinguished_lifts, has_regular_lift, is_cuspidal_st, milon_sign,
    poulain_lift_decision, poupin_lift_decision, r_of, s_sign, sigma_selfdual_cuspidals, supercuspidal_support,
    CuspidalRepFF, QuadResidueExt,
};
use crate::gl2::{Gl2Oracle, Subgroup};
use crate::padic::{
    self, consistency_checks, distinguished_lift_oracle, has_distinguished_lift, is_distinguished_level0,
    kappa_distinguished, mu_distinguished, reduce_to_level0, thmodd_necessary, twist_by_tame, EndoInvariants,
    GeneralCuspidalDatum, LevelZeroCuspidalDatum, TameCharacter,
};
use crate::verdict::Verdict;

enum Outcome {
    Done(Tally),
    Skip(String),
}

#[derive(Default)]
struct Tally {
    checked: u64,
    witness: Option<Value>,
}

impl Tally {
    /// Records one comparison, keeping the first failure.
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

pub(super) fn run(property: PropertyId, cell: &Cell, spec: &GridSpec) -> PropertyReport {
    use PropertyId::*;
    let limit = spec.exhaustive_limit as u128;
    let result = match property {
        P1 => p1(cell, limit),
        P2 => p2(cell, limit),
        P3 => p3(cell, limit),
        P4 => p4(cell, spec),
        P5 => p5(cell),
        P6 | P7 => p6_p7(cell, limit),
        P8 => p8(cell, limit),
        P9 => p9(cell, limit),
        P10 => p10(cell, limit),
        P11 => p11(cell, limit),
        P12 => p12(cell, limit),
    };
    let (status, reason, checked, witness) = match result {
        Ok(Outcome::Done(t)) => {
            let status = if t.witness.is_some() { Status::Fail } else { Status::Pass };
            (status, None, t.checked, t.witness)
        }
        Ok(Outcome::Skip(reason)) => (Status::Skipped, Some(reason), 0, None),
        Err(Error::TooLarge { modulus, limit }) => {
            (Status::Skipped, Some(format!("modulus {modulus} exceeds the exhaustive limit {limit}")), 0, None)
        }
        Err(e) => (Status::Fail, Some(e.to_string()), 0, Some(json!({ "error": e.to_string(), "cell": cell }))),
    };
    PropertyReport { property, cell: cell.clone(), status, reason, checked, witness }
}

fn ext_of(cell: &Cell) -> QuadResidueExt {
    cell.ext.expect("cell without extension")
}

/// A finite cuspidal wrapped as a level-zero datum so that it can be replayed by `classify`.
fn finite_witness(w: &CuspidalRepFF, detail: Value) -> Value {
    let datum = QuadResidueExt::ramified(w.q())
        .and_then(|ext| LevelZeroCuspidalDatum::new(ext, w.n(), w.coeff(), w.clone(), RationalAngle::ZERO));
    match datum {
        Ok(d) => json!({ "datum": d, "detail": detail }),
        Err(_) => json!({ "param": w, "detail": detail }),
    }
}

fn datum_witness(d: &LevelZeroCuspidalDatum, detail: Value) -> Value {
    json!({ "datum": d, "detail": detail })
}

fn data(cell: &Cell, limit: u128) -> Result<Vec<LevelZeroCuspidalDatum>> {
    padic::sigma_selfdual_data(&ext_of(cell), cell.n, cell.coeff(), limit)
}

fn p1(cell: &Cell, limit: u128) -> Result<Outcome> {
    let mut t = Tally::default();
    let mobius = regular_orbit_count(cell.q, cell.n)?;
    let listed = enumerate_cuspidals(cell.q, cell.n, Coeff::Zero, limit)?.len() as u128;
    t.check(mobius == listed, || json!({ "cell": cell, "mobius": mobius, "enumerated": listed }));
    Ok(Outcome::Done(t))
}

fn p2(cell: &Cell, limit: u128) -> Result<Outcome> {
    let l = cell.ell.expect("modular cell");
    let mut t = Tally::default();
    let zero = enumerate_cuspidals(cell.q, cell.n, Coeff::Zero, limit)?;
    let modular: BTreeSet<CuspidalRepFF> = enumerate_cuspidals(cell.q, cell.n, Coeff::Mod(l), limit)?.into_iter().collect();
    for w in &zero {
        let red = w.reduce_mod_l(l)?;
        t.check(modular.contains(&red), || finite_witness(w, json!("reduction is not a modular cuspidal")));
    }
    let mut fibres = 0u128;
    for x in &modular {
        let mut regular = 0u128;
        for c in x.param().lifts()? {
            t.check(c.reduce_mod_l(l)? == *x.param(), || finite_witness(x, json!({ "lift": c })));
            if c.is_regular() {
                regular += 1;
            }
        }
        t.check(regular > 0, || finite_witness(x, json!("modular cuspidal without a regular lift")));
        let in_orbit = regular * x.param().orbit_size() as u128;
        t.check(in_orbit.is_multiple_of(cell.n as u128), || finite_witness(x, json!({ "regular_lifts": regular })));
        fibres += in_orbit / cell.n as u128;
    }
    let total = zero.len() as u128;
    t.check(fibres == total, || json!({ "cell": cell, "fibre_sum": fibres, "cuspidals": total }));
    Ok(Outcome::Done(t))
}

fn p3(cell: &Cell, limit: u128) -> Result<Outcome> {
    let l = cell.ell.expect("modular cell");
    let coeff = Coeff::Mod(l);
    let mut t = Tally::default();
    for f in divisors(cell.n) {
        let u = cell.n / f;
        if u == 1 {
            continue;
        }
        for rho in enumerate_cuspidals(cell.q, f, coeff, limit)? {
            if r_of(&rho) != 1 {
                continue;
            }
            let predicted = is_cuspidal_st(&rho, u, l)?;
            let inflated = rho.param().inflate(u)?;
            let actual = has_regular_lift(&inflated)?;
            t.check(predicted == actual, || {
                json!({ "cell": cell, "support": rho, "u": u, "predicted": predicted, "regular_lift": actual })
            });
            if actual {
                let w = CuspidalRepFF::new(inflated)?;
                let s = supercuspidal_support(&w)?;
                t.check(s.u == u && r_of(&w) == u && s.scusp == rho, || {
                    finite_witness(&w, json!({ "r": r_of(&w), "expected_r": u, "support": s.scusp }))
                });
            }
        }
    }
    match enumerate_cuspidals(cell.q, cell.n, coeff, limit) {
        Ok(all) => {
            for w in all {
                let s = supercuspidal_support(&w)?;
                let ok = s.u == r_of(&w) && is_cuspidal_st(&s.scusp, s.u, l)?;
                t.check(ok, || finite_witness(&w, json!({ "r": s.u, "support_rank": s.f })));
            }
        }
        Err(Error::TooLarge { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(Outcome::Done(t))
}

fn sign_of(a: RationalAngle) -> i64 {
    if a.is_zero() {
        1
    } else {
        -1
    }
}

fn p4(cell: &Cell, spec: &GridSpec) -> Result<Outcome> {
    if !spec.oracle {
        return Ok(Outcome::Skip("oracle disabled".into()));
    }
    let ext = ext_of(cell);
    let q = ext.q();
    if q > spec.oracle_max_q {
        return Ok(Outcome::Skip(format!("q = {q} exceeds the oracle limit {}", spec.oracle_max_q)));
    }
    let oracle = Gl2Oracle::new(q, spec.oracle_max_q)?;
    let mut t = Tally::default();
    let cert = oracle.certify();
    t.check(cert.all_pass(), || json!({ "cell": cell, "certificate": cert }));
    for theta in oracle.thetas() {
        let w = CuspidalRepFF::from_exponent(q, 2, Coeff::Zero, theta as u128)?;
        if ext.ramified {
            let dim = oracle.invariant_dim(theta, Subgroup::DiagonalTorus)?;
            let trivial = w.param().is_trivial_on_subfield(1)?;
            t.check(dim <= 1 && (dim == 1) == trivial, || finite_witness(&w, json!({ "torus_dim": dim })));
            if dim == 1 {
                let sign = oracle.twisted_sign(theta)?;
                let expected = sign_of(s_sign(&w)?);
                t.check(sign == expected, || finite_witness(&w, json!({ "oracle_sign": sign, "parameter_sign": expected })));
            }
        } else {
            let dim = oracle.invariant_dim(theta, Subgroup::RationalForm(ext.q0))?;
            t.check(dim == 0, || finite_witness(&w, json!({ "rational_form_dim": dim })));
        }
    }
    if !ext.ramified {
        let sd = sigma_selfdual_cuspidals(q, 2, Coeff::Zero, &ext, u128::MAX)?;
        t.check(sd.is_empty(), || json!({ "cell": cell, "sigma_selfdual": sd }));
    }
    Ok(Outcome::Done(t))
}

fn p5(cell: &Cell) -> Result<Outcome> {
    let l = cell.ell.expect("modular cell");
    let coeff = Coeff::Mod(l);
    let q = cell.q;
    let mut t = Tally::default();
    let legendre = CyclicCharacter::new(q, 1, Coeff::Zero, ((q - 1) / 2) as u128)?.reduce_mod_l(l)?;
    let rhos: BTreeSet<CyclicCharacter> = [CyclicCharacter::trivial(q, 1, coeff)?, legendre].into_iter().collect();
    for rho in rhos {
        let param = rho.inflate(cell.n)?.canonical();
        if !has_regular_lift(&param)? {
            continue;
        }
        let w = CuspidalRepFF::new(param)?;
        let ours = s_sign(&w)?;
        let closed = milon_sign(&w)?;
        t.check(ours == closed, || finite_witness(&w, json!({ "s_sign": ours, "milon_sign": closed })));
        let ext = QuadResidueExt::ramified(q)?;
        for lift in enumerate_distinguished_lifts(&w, &ext)? {
            let down = s_sign(&lift)?.reduce(coeff);
            t.check(down == ours, || finite_witness(&w, json!({ "lift": lift, "lift_sign_reduced": down })));
        }
    }
    Ok(Outcome::Done(t))
}

fn p6_p7(cell: &Cell, limit: u128) -> Result<Outcome> {
    let ext = ext_of(cell);
    let coeff = cell.coeff();
    let mut t = Tally::default();
    for w in sigma_selfdual_cuspidals(ext.q(), cell.n, coeff, &ext, limit)? {
        let lemma = if ext.ramified { poupin_lift_decision(&w, &ext)? } else { poulain_lift_decision(&w, &ext)? };
        let found = enumerate_distinguished_lifts(&w, &ext)?;
        t.check(lemma == !found.is_empty(), || finite_witness(&w, json!({ "lemma": lemma, "lifts": found })));
    }
    for d in data(cell, limit)? {
        let decided = has_distinguished_lift(&d)?;
        let oracle = distinguished_lift_oracle(&d)?;
        t.check(decided.value == !oracle.is_empty(), || {
            datum_witness(&d, json!({ "has_distinguished_lift": decided, "oracle_lifts": oracle }))
        });
    }
    Ok(Outcome::Done(t))
}

fn p8(cell: &Cell, limit: u128) -> Result<Outcome> {
    let l = cell.ell.expect("modular cell");
    let mut t = Tally::default();
    for d in data(cell, limit)? {
        let checks = consistency_checks(&d)?;
        let c = checks.iter().find(|c| c.name == "even-r-congruence").expect("check present");
        let r = r_of(d.finite_param());
        let direct = r % 2 == 1 || pow_mod(d.q() as u128, (cell.n / 2) as u128, l as u128) == (l - 1) as u128;
        t.check(c.pass && direct, || datum_witness(&d, json!({ "r": r, "check": c })));
    }
    Ok(Outcome::Done(t))
}

fn p9(cell: &Cell, limit: u128) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in data(cell, limit)? {
        let dist = is_distinguished_level0(&d)?;
        let lift = has_distinguished_lift(&d)?.value;
        let oracle = !distinguished_lift_oracle(&d)?.is_empty();
        t.check(!(lift || oracle) || dist.is_yes(), || {
            datum_witness(&d, json!({ "lift": lift, "oracle": oracle, "distinguished": dist }))
        });
    }
    Ok(Outcome::Done(t))
}

fn p10(cell: &Cell, limit: u128) -> Result<Outcome> {
    let mut t = Tally::default();
    let two = cell.ell == Some(2);
    for d in data(cell, limit)? {
        let r = r_of(d.finite_param());
        let dist = is_distinguished_level0(&d)?;
        let kap = kappa_distinguished(&d)?;
        if r > 1 && r % 2 == 1 {
            t.check(!(dist.is_yes() && kap.is_yes()), || {
                datum_witness(&d, json!({ "distinguished": dist, "kappa_distinguished": kap }))
            });
            let rep = thmodd_necessary(&d)?;
            t.check(!dist.is_yes() || rep.both_pass(), || datum_witness(&d, json!({ "thmodd": rep })));
        }
        if r == 1 && !two {
            let known = dist.verdict != Verdict::Unknown && kap.verdict != Verdict::Unknown;
            let yes = dist.is_yes() as u8 + kap.is_yes() as u8;
            t.check(yes <= 1 && (!known || yes == 1), || {
                datum_witness(&d, json!({ "distinguished": dist, "kappa_distinguished": kap }))
            });
        }
    }
    Ok(Outcome::Done(t))
}

fn p11(cell: &Cell, limit: u128) -> Result<Outcome> {
    let mut t = Tally::default();
    for d in data(cell, limit)? {
        let checks = consistency_checks(&d)?;
        let c = checks.iter().find(|c| c.name == "selfdual-parity").expect("check present");
        t.check(c.applicable && c.pass, || datum_witness(&d, json!({ "check": c })));
    }
    Ok(Outcome::Done(t))
}

/// A few tame characters of `F^x` with residue field of size `q`.
fn tame_family(q: u64, coeff: Coeff) -> Result<Vec<TameCharacter>> {
    let m = coeff.visible((q - 1) as u128);
    let mut units = vec![0, 1 % m];
    if m.is_multiple_of(2) {
        units.push(m / 2);
    }
    let mut angles = vec![RationalAngle::ZERO, RationalAngle::HALF.reduce(coeff)];
    let third = RationalAngle::new(1, 3)?;
    if third.admissible(coeff) {
        angles.push(third);
    }
    let mut out = Vec::new();
    for &u in &units {
        for &a in &angles {
            let t = TameCharacter::new(CyclicCharacter::new(q, 1, coeff, u)?, a)?;
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// The integer `s` with `s^k = q`, if any.
fn exact_root(q: u64, k: u32) -> Option<u64> {
    (2..=q).take_while(|s| s.pow(k) <= q).find(|s| s.pow(k) == q)
}

fn p12(cell: &Cell, limit: u128) -> Result<Outcome> {
    let ext = ext_of(cell);
    let coeff = cell.coeff();
    let q = ext.q();
    let p = PrimePower::new(q)?.p;
    let mut t = Tally::default();
    let chars = tame_family(q, coeff)?;
    for (i, a) in chars.iter().enumerate() {
        for b in &chars[i..] {
            for (f, e) in [(1, 1), (1, 2), (2, 1), (2, 3)] {
                let lhs = a.mul(b)?.compose_norm(f, e)?;
                let rhs = a.compose_norm(f, e)?.mul(&b.compose_norm(f, e)?)?;
                t.check(lhs == rhs, || json!({ "cell": cell, "chi1": a, "chi2": b, "f": f, "e": e }));
            }
        }
    }
    let mut general_shapes: Vec<(QuadResidueExt, EndoInvariants)> = Vec::new();
    for w in [0, 1] {
        general_shapes.push((
            QuadResidueExt::ramified(q)?,
            EndoInvariants { degree: 2 * p.pow(w), f_t: 1, e_t: 2, wild_exponent: w, t_ramified: ext.ramified },
        ));
    }
    if let Some(base) = exact_root(q, 2).filter(|b| PrimePower::new(*b).is_ok()) {
        general_shapes.push((
            QuadResidueExt::ramified(base)?,
            EndoInvariants { degree: 2, f_t: 2, e_t: 1, wild_exponent: 0, t_ramified: ext.ramified },
        ));
    }
    let shape_chars: Vec<Vec<TameCharacter>> =
        general_shapes.iter().map(|(f_ext, _)| tame_family(f_ext.q(), coeff)).collect::<Result<_>>()?;
    for d in data(cell, limit)? {
        let g = GeneralCuspidalDatum::level_zero(d.clone());
        let base_ext = *d.ext();
        let dist = is_distinguished_level0(&d)?;
        for chi in &chars {
            let tw = g.twist(chi)?;
            let direct = twist_by_tame(&d, chi)?;
            t.check(reduce_to_level0(&tw) == direct, || datum_witness(&d, json!({ "chi": chi, "step": "reduce-twist" })));
            let back = tw.twist(&chi.inverse())?;
            t.check(back == g, || datum_witness(&d, json!({ "chi": chi, "step": "twist-inverse" })));
            t.check(r_of(direct.finite_param()) == r_of(d.finite_param()), || {
                datum_witness(&d, json!({ "chi": chi, "step": "r-preserved" }))
            });
            let mu = chi.restrict_to_base(&base_ext)?.inverse();
            let via_mu = mu_distinguished(&d, &mu)?.verdict;
            let twisted = is_distinguished_level0(&direct)?.verdict;
            t.check(via_mu == twisted, || {
                datum_witness(&d, json!({ "chi": chi, "mu_distinguished": via_mu, "twisted": twisted }))
            });
        }
        let triv = TameCharacter::trivial(base_ext.q0, coeff)?;
        t.check(mu_distinguished(&d, &triv)?.verdict == dist.verdict, || {
            datum_witness(&d, json!({ "step": "trivial-mu" }))
        });
        for ((f_ext, endo), family) in general_shapes.iter().zip(&shape_chars) {
            let gd = GeneralCuspidalDatum::new(*f_ext, *endo, cell.n, d.clone())?;
            t.check(gd.n() == cell.n * endo.degree && reduce_to_level0(&gd) == d, || {
                datum_witness(&d, json!({ "endo": endo, "step": "general-shape" }))
            });
            for chi in family {
                let on_t = chi.compose_norm(endo.f_t, endo.e_t)?;
                let lhs = reduce_to_level0(&gd.twist(chi)?);
                let rhs = twist_by_tame(&d, &on_t)?;
                t.check(lhs == rhs, || datum_witness(&d, json!({ "endo": endo, "chi": chi, "step": "general-twist" })));
                let back = gd.twist(chi)?.twist(&chi.inverse())?;
                t.check(back == gd, || datum_witness(&d, json!({ "endo": endo, "chi": chi, "step": "general-inverse" })));
            }
        }
    }
    Ok(Outcome::Done(t))
}
