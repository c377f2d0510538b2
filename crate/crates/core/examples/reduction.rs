//! Reduction of characteristic-zero cuspidals modulo l and the supercuspidal support of
//! the reductions.
//!
//! `cargo run --example reduction [q n l]`

use cuspdist::character::Coeff;
use cuspdist::finite::{enumerate_cuspidals, is_cuspidal_st, r_of, supercuspidal_support};

fn main() -> cuspdist::error::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (q, n, l) = match args[..] {
        [q, n, l] => (q, n, l),
        _ => (5, 2, 3),
    };
    println!("GL_{n}(F_{q}), l = {l}");
    for w in enumerate_cuspidals(q, n, Coeff::Zero, 1 << 24)? {
        let x = w.reduce_mod_l(l)?;
        let s = supercuspidal_support(&x)?;
        println!(
            "  exponent {:>4} -> {:>4}  r = {}  support GL_{} exponent {}",
            w.param().exponent(),
            x.param().exponent(),
            r_of(&x),
            s.f,
            s.scusp.param().exponent()
        );
    }
    for w in enumerate_cuspidals(q, 1, Coeff::Mod(l), 1 << 24)? {
        let cusp: Vec<u64> = (1..=n).filter(|&u| is_cuspidal_st(&w, u, l).unwrap_or(false)).collect();
        println!("  st_u(chi_{}) cuspidal for u in {cusp:?}", w.param().exponent());
    }
    Ok(())
}
