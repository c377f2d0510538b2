//! Cuspidal counts of GL_n(F_q): the Möbius formula against a direct orbit enumeration.

use cuspdist::arith::regular_orbit_count;
use cuspdist::character::Coeff;
use cuspdist::finite::enumerate_cuspidals;

fn main() -> cuspdist::error::Result<()> {
    for q in [3u64, 5, 7, 9, 13] {
        let mut line = format!("q={q:<3}");
        for n in 1..=6u64 {
            let formula = regular_orbit_count(q, n)?;
            let listed = enumerate_cuspidals(q, n, Coeff::Zero, 1 << 26).map(|v| v.len() as u128);
            match listed {
                Ok(c) if c == formula => line += &format!(" n={n}:{formula}"),
                Ok(c) => line += &format!(" n={n}:{formula}!={c}"),
                Err(_) => line += &format!(" n={n}:{formula}(formula)"),
            }
        }
        println!("{line}");
    }
    Ok(())
}
