use std::io::Write;

use cuspdist::arith::regular_orbit_count;
use cuspdist::character::{Coeff, CyclicCharacter};
use cuspdist::finite::{
    enumerate_cuspidals, enumerate_distinguished_lifts, is_distinguished_ff, milon_sign, poupin_lift_decision, s_sign,
    sigma_selfdual_cuspidals, CuspidalRepFF, QuadResidueExt,
};
use cuspdist::gl2::{Gl2Oracle, Subgroup, DEFAULT_MAX_Q};
use cuspdist::harness::{minimal_failure, run_battery, GridSpec, PropertyId, PropertyReport, Status};
use cuspdist::padic::{classify, distinguished_lift_oracle, LevelZeroCuspidalDatum, Restriction};
use cuspdist::verdict::Verdict;

fn report(n: u32, what: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("criterion {n} [{status}] {what}\n");
    for f in failures.iter().take(5) {
        line += &format!("    {f}\n");
    }
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(failures.is_empty(), "criterion {n}: {failures:?}");
}

fn sign(a: cuspdist::angle::RationalAngle) -> i64 {
    if a.is_zero() {
        1
    } else {
        -1
    }
}

fn battery_failures(props: &[PropertyId]) -> Vec<String> {
    let spec = GridSpec { properties: props.to_vec(), ..GridSpec::default() };
    let rows: Vec<PropertyReport> = run_battery(&spec);
    let mut out = Vec::new();
    for p in props {
        let mine: Vec<_> = rows.iter().filter(|r| r.property == *p).collect();
        if mine.is_empty() {
            out.push(format!("{p}: no cells"));
        }
        if mine.iter().all(|r| r.status == Status::Skipped) {
            out.push(format!("{p}: every cell skipped"));
        }
        if let Some(f) = minimal_failure(&rows, *p) {
            let n = mine.iter().filter(|r| r.status == Status::Fail).count();
            out.push(format!("{p}: {n} failing cells, least {} {:?}", f.cell, f.witness));
        }
    }
    out
}

#[test]
fn criterion_1_counting() {
    let mut bad = Vec::new();
    for q in [3u64, 5, 7, 9, 13] {
        for n in 1..=6u64 {
            let formula = regular_orbit_count(q, n).unwrap();
            let listed = enumerate_cuspidals(q, n, Coeff::Zero, 1 << 26).unwrap().len() as u128;
            if formula != listed {
                bad.push(format!("q={q} n={n}: formula {formula}, enumeration {listed}"));
            }
        }
    }
    for (q, want) in [(3, 3), (5, 10), (9, 36)] {
        let got = regular_orbit_count(q, 2).unwrap();
        if got != want {
            bad.push(format!("q={q} n=2: {got}, expected {want}"));
        }
    }
    report(1, "cuspidal counts: Möbius formula equals orbit enumeration, q in {3,5,7,9,13}, n <= 6", &bad);
}

#[test]
fn criterion_2_gl2_certificate() {
    let mut bad = Vec::new();
    for q in [3u64, 5, 7, 9, 13] {
        let cert = Gl2Oracle::new(q, DEFAULT_MAX_Q).unwrap().full_report().unwrap();
        for name in ["orthonormality", "degree", "cuspidality", "elliptic-trace"] {
            let hits: Vec<_> = cert.identities.iter().filter(|i| i.name.starts_with(name)).collect();
            if hits.len() != 2 {
                bad.push(format!("q={q}: {name} checked in {} splitting primes", hits.len()));
            }
        }
        if cert.p == cert.p_prime {
            bad.push(format!("q={q}: splitting primes coincide"));
        }
        for i in cert.identities.iter().filter(|i| !i.pass) {
            bad.push(format!("q={q}: {} fails", i.name));
        }
    }
    report(2, "GL_2 cuspidal table certified in two splitting primes, q in {3,5,7,9,13}", &bad);
}

#[test]
fn criterion_3_iff_chain() {
    let mut bad = Vec::new();
    for q in [3u64, 5, 7] {
        let oracle = Gl2Oracle::new(q, DEFAULT_MAX_Q).unwrap();
        let ext = QuadResidueExt::ramified(q).unwrap();
        for theta in oracle.thetas() {
            let w = CuspidalRepFF::from_exponent(q, 2, Coeff::Zero, theta as u128).unwrap();
            let dim = oracle.invariant_dim(theta, Subgroup::DiagonalTorus).unwrap();
            let trivial = w.param().is_trivial_on_subfield(1).unwrap();
            let verdict = is_distinguished_ff(&w, &ext).unwrap().verdict;
            if dim > 1 || (dim == 1) != trivial || (verdict == Verdict::Yes) != trivial {
                bad.push(format!("q={q} theta={theta}: dim {dim}, trivial {trivial}, verdict {verdict:?}"));
            }
            if dim == 1 {
                let got = oracle.twisted_sign(theta).unwrap();
                let want = sign(s_sign(&w).unwrap());
                if got != want {
                    bad.push(format!("q={q} theta={theta}: oracle sign {got}, parameter sign {want}"));
                }
            }
        }
    }
    let oracle = Gl2Oracle::new(5, DEFAULT_MAX_Q).unwrap();
    for (theta, want) in [(4u64, 1i64), (20, 1), (8, -1), (16, -1)] {
        let w = CuspidalRepFF::from_exponent(5, 2, Coeff::Zero, theta as u128).unwrap();
        let orbit_theta = oracle.thetas().into_iter().find(|t| w.param().frobenius_orbit().contains(&(*t as u128)));
        let got = orbit_theta.map(|t| oracle.twisted_sign(t).unwrap());
        if got != Some(want) || sign(s_sign(&w).unwrap()) != want {
            bad.push(format!("q=5 theta={theta}: sign {got:?}, expected {want}"));
        }
    }
    report(3, "n = 2: torus invariants, parameter criterion and block-swap sign agree, q in {3,5,7}", &bad);
}

#[test]
fn criterion_4_unramified_vanishing() {
    let mut bad = Vec::new();
    for (q0, cases) in [(3u64, 36usize), (5, 300)] {
        let q = q0 * q0;
        let oracle = Gl2Oracle::new(q, q).unwrap();
        let thetas = oracle.thetas();
        if thetas.len() != cases {
            bad.push(format!("q0={q0}: {} cuspidals, expected {cases}", thetas.len()));
        }
        for theta in thetas {
            let dim = oracle.invariant_dim(theta, Subgroup::RationalForm(q0)).unwrap();
            if dim != 0 {
                bad.push(format!("q0={q0} theta={theta}: invariant dimension {dim}"));
            }
        }
        let ext = QuadResidueExt::unramified(q0).unwrap();
        let sd = sigma_selfdual_cuspidals(q, 2, Coeff::Zero, &ext, u128::MAX).unwrap();
        if !sd.is_empty() {
            bad.push(format!("q0={q0}: {} sigma-selfdual cuspidals", sd.len()));
        }
        if enumerate_cuspidals(q, 2, Coeff::Zero, u128::MAX).unwrap().len() != cases {
            bad.push(format!("q0={q0}: parameter count differs from {cases}"));
        }
    }
    report(4, "GL_2(F_q0^2) has no GL_2(F_q0)-invariants and no sigma-selfdual cuspidal, q0 in {3,5}", &bad);
}

#[test]
fn criterion_5_lift_lemmas() {
    let mut bad = battery_failures(&[PropertyId::P6, PropertyId::P7]);

    let ext = QuadResidueExt::ramified(3).unwrap();
    let st4 = CuspidalRepFF::from_exponent(3, 4, Coeff::Mod(5), 0).unwrap();
    let lifts = enumerate_distinguished_lifts(&st4, &ext).unwrap();
    let orbits: Vec<Vec<u128>> = lifts.iter().map(|c| c.param().frobenius_orbit()).collect();
    let mut first: Vec<u128> = orbits.first().cloned().unwrap_or_default();
    first.sort();
    if orbits.len() != 1 || first != vec![16, 32, 48, 64] || !poupin_lift_decision(&st4, &ext).unwrap() {
        bad.push(format!("q=3 l=5 st_4(1): lifts {orbits:?}"));
    }

    let ext = QuadResidueExt::ramified(5).unwrap();
    let legendre = CyclicCharacter::new(5, 1, Coeff::Zero, 2).unwrap().reduce_mod_l(3).unwrap();
    let trivial = CyclicCharacter::trivial(5, 1, Coeff::Mod(3)).unwrap();
    for (rho, orbit, want) in [(trivial, vec![8u128, 16], -1i64), (legendre, vec![4, 20], 1)] {
        let w = CuspidalRepFF::new(rho.inflate(2).unwrap().canonical()).unwrap();
        let lifts = enumerate_distinguished_lifts(&w, &ext).unwrap();
        let got: Vec<Vec<u128>> = lifts.iter().map(|c| c.param().frobenius_orbit()).collect();
        if got != vec![orbit.clone()] {
            bad.push(format!("q=5 l=3 rho={}: lifts {got:?}, expected {orbit:?}", rho.exponent()));
            continue;
        }
        let lift_sign = sign(s_sign(&lifts[0]).unwrap());
        let closed = sign(milon_sign(&w).unwrap());
        let reduced = sign(s_sign(&w).unwrap());
        if lift_sign != want || closed != want || reduced != want {
            bad.push(format!("q=5 l=3 orbit {orbit:?}: lift sign {lift_sign}, closed form {closed}, reduced {reduced}"));
        }
    }
    report(5, "lift decisions equal lift enumeration on the grid, with the named instances", &bad);
}

#[test]
fn criterion_6_theorem_consistency() {
    let bad = battery_failures(&[PropertyId::P3, PropertyId::P8, PropertyId::P9, PropertyId::P10, PropertyId::P11]);
    report(6, "P3, P8, P9, P10 and P11 without failures on the full grid", &bad);
}

#[test]
fn criterion_7_worked_instance() {
    let mut bad = Vec::new();
    let ext = QuadResidueExt::ramified(3).unwrap();
    let datum = LevelZeroCuspidalDatum::from_parts(ext, 4, Coeff::Mod(5), 0, "1/2").unwrap();
    let c = classify(&datum).unwrap();
    if c.r != 4 {
        bad.push(format!("r = {}", c.r));
    }
    if c.distinguished.verdict != Verdict::Yes {
        bad.push(format!("distinguished {:?}", c.distinguished.verdict));
    }
    match &c.lift {
        Some(l) if l.value && l.support_restriction == Some(Restriction::Nu0Inverse) => {}
        other => bad.push(format!("lift {other:?}")),
    }
    if distinguished_lift_oracle(&datum).unwrap().is_empty() {
        bad.push("no distinguished lift found by search".into());
    }
    report(7, "ramified q=3, l=5, st_4(1), central angle 1/2: distinguished, lift via nu_0^-1, r = 4", &bad);
}
