//! Full classification of a level-zero datum over a ramified quadratic extension of a
//! 3-adic field, with mod-5 coefficients and r = 4.
//!
//! `cargo run --example level_zero [path/to/datum.json]`

use cuspdist::character::Coeff;
use cuspdist::finite::QuadResidueExt;
use cuspdist::padic::{classify, distinguished_lift_oracle, LevelZeroCuspidalDatum};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let datum = match std::env::args().nth(1) {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => LevelZeroCuspidalDatum::from_parts(QuadResidueExt::ramified(3)?, 4, Coeff::Mod(5), 0, "1/2")?,
    };
    let c = classify(&datum)?;
    println!("r = {}, support angles {:?}", c.r, c.support.ambiguity.iter().map(|a| a.to_string()).collect::<Vec<_>>());
    println!("distinguished: {:?}", c.distinguished.verdict);
    for step in &c.distinguished.certificate {
        println!("  {} ({})", step.rule, step.anchor);
    }
    if let Some(l) = &c.lift {
        println!("distinguished lift: {} via {:?}", l.value, l.support_restriction);
    }
    println!("lifts found by search: {}", distinguished_lift_oracle(&datum)?.len());
    println!("{}", serde_json::to_string_pretty(&c)?);
    Ok(())
}
