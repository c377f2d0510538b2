//! Distinction of the cuspidals of GL_2(F_q) by the Levi subgroup and by GL_2(F_q0),
//! with the sign of the block swap.

use cuspdist::character::Coeff;
use cuspdist::finite::{enumerate_cuspidals, is_distinguished_ff, s_sign, QuadResidueExt};

fn main() -> cuspdist::error::Result<()> {
    for q in [3u64, 5, 7] {
        let levi = QuadResidueExt::ramified(q)?;
        for w in enumerate_cuspidals(q, 2, Coeff::Zero, 1 << 20)? {
            let d = is_distinguished_ff(&w, &levi)?;
            let sign = s_sign(&w).map(|a| if a.is_zero() { "+1" } else { "-1" }).unwrap_or("");
            println!("q={q} orbit {:?}: Levi {:?} {sign}", w.param().frobenius_orbit(), d.verdict);
        }
    }
    let ext = QuadResidueExt::unramified(3)?;
    let count = enumerate_cuspidals(9, 2, Coeff::Zero, 1 << 20)?
        .iter()
        .filter(|w| is_distinguished_ff(w, &ext).map(|d| d.is_yes()).unwrap_or(false))
        .count();
    println!("GL_2(F_3)-distinguished cuspidals of GL_2(F_9): {count}");
    Ok(())
}
