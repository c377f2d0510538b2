//! Distinction of cuspidal representations of `GL_n` under the Galois involution of a
//! quadratic extension, over finite fields and for level-zero cuspidals of p-adic groups,
//! with characteristic-zero and modular coefficients.
//!
//! Characters of `F_(q^n)^x` are stored as exponents modulo the order of the visible
//! group, and values of characters as angles in `Q/Z`; see [`angle`] and [`character`].
//!
//! Examples (`cargo run --example <name>`):
//!
//! - `counting`: cuspidal counts against the Möbius formula
//! - `reduction`: reduction modulo l and supercuspidal supports
//! - `gl2_oracle`: the `GL_2(F_q)` character-table certificate
//! - `finite_distinction`: Levi and Galois distinction over finite fields, with signs
//! - `lift_lemmas`: distinguished lifts of modular cuspidals
//! - `level_zero`: classification of a level-zero datum
//! - `battery`: the property battery on the default grid

pub mod angle;
pub mod arith;
pub mod character;
pub mod cli;
pub mod error;
pub mod finite;
pub mod gl2;
pub mod harness;
pub mod padic;
pub mod verdict;
