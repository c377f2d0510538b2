use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: u128, modulus: u128 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not an odd prime power")]
    EvenCharacteristic(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ell = {l} equals the residue characteristic {p}")]
    EllEqualsP { l: u64, p: u64 },
    #[error("{q}^{n} - 1 exceeds the width limit")]
    Overflow { q: u64, n: u64 },
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("exponent {exponent} is out of range for modulus {modulus}")]
    ExponentRange { exponent: u128, modulus: u128 },
    #[error("malformed angle: {0}")]
    Angle(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("enumeration of modulus {modulus} exceeds limit {limit}")]
    TooLarge { modulus: u128, limit: u128 },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
