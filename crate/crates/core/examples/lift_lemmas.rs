//! Distinguished lifts of modular cuspidals: the closed-form decisions against a direct
//! enumeration of the lifts.

use cuspdist::character::Coeff;
use cuspdist::finite::{
    enumerate_cuspidals, enumerate_distinguished_lifts, is_sigma_selfdual_ff, milon_sign, poulain_lift_decision,
    poupin_lift_decision, s_sign, CuspidalRepFF, QuadResidueExt,
};

fn show(w: &CuspidalRepFF, ext: &QuadResidueExt) -> cuspdist::error::Result<()> {
    let lifts = enumerate_distinguished_lifts(w, ext)?;
    let rule = if ext.ramified { poupin_lift_decision(w, ext)? } else { poulain_lift_decision(w, ext)? };
    let orbits: Vec<_> = lifts.iter().map(|c| c.param().frobenius_orbit()).collect();
    println!("  exponent {:>3}: rule {rule:<5} lifts {orbits:?}", w.param().exponent());
    if ext.ramified && w.n() == 2 {
        for c in &lifts {
            println!("    sign {} (closed form {})", s_sign(c)?, milon_sign(w).map(|a| a.to_string()).unwrap_or("-".into()));
        }
    }
    Ok(())
}

fn main() -> cuspdist::error::Result<()> {
    let q = 5;
    let l = 3;
    let ext = QuadResidueExt::ramified(q)?;
    println!("q={q} l={l} Levi");
    for w in enumerate_cuspidals(q, 2, Coeff::Mod(l), 1 << 20)? {
        if is_sigma_selfdual_ff(&w, &ext)? {
            show(&w, &ext)?;
        }
    }
    let ext = QuadResidueExt::unramified(3)?;
    for l in [2, 5, 7] {
        println!("q=9 n=3 l={l} Galois");
        for w in enumerate_cuspidals(9, 3, Coeff::Mod(l), 1 << 20)? {
            if is_sigma_selfdual_ff(&w, &ext)? {
                show(&w, &ext)?;
            }
        }
    }
    Ok(())
}
