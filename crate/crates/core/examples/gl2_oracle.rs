//! Independent check through the character table of GL_2(F_q): identities, invariant
//! dimensions and the signs of the torus-distinguished cuspidals.
//!
//! `cargo run --release --example gl2_oracle [q]`

use cuspdist::gl2::{Gl2Oracle, DEFAULT_MAX_Q};

fn main() -> cuspdist::error::Result<()> {
    let q = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let report = Gl2Oracle::new(q, DEFAULT_MAX_Q.max(q))?.full_report()?;
    println!("q = {q}, working primes {} and {}", report.p, report.p_prime);
    for i in &report.identities {
        println!("  {:<36} {}", i.name, if i.pass { "ok" } else { "FAILED" });
    }
    for s in &report.signs {
        println!("  theta {:>3}  sign {:+}", s.theta, s.sign);
    }
    println!("certificate {}", if report.all_pass() { "passes" } else { "fails" });
    Ok(())
}
