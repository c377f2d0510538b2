//! Elements of `Q/Z`, used as coordinates for roots of unity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{add_mod, discrete_log, gcd, inv_mod, l_adic_split, mul_mod};
use crate::character::Coeff;
use crate::error::{Error, Result};

/// `num/den mod 1`, always reduced with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RationalAngle {
    num: u128,
    den: u128,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };
    pub const HALF: RationalAngle = RationalAngle { num: 1, den: 2 };

    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Angle("zero denominator".into()));
        }
        let num = num % den;
        let g = gcd(num, den);
        Ok(RationalAngle { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The angle of `-1` raised to `bit`.
    pub fn sign(negative: bool) -> Self {
        if negative {
            Self::HALF
        } else {
            Self::ZERO
        }
    }

    pub fn neg(&self) -> Self {
        RationalAngle { num: (self.den - self.num) % self.den, den: self.den }
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = crate::arith::lcm(self.den, other.den);
        let a = mul_mod(self.num, den / self.den, den);
        let b = mul_mod(other.num, den / other.den, den);
        Self::new(add_mod(a, b, den), den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u128) -> Self {
        Self::new(mul_mod(self.num, k, self.den), self.den).expect("nonzero denominator")
    }

    pub fn scale_signed(&self, k: i128) -> Self {
        let s = self.scale(k.unsigned_abs());
        if k < 0 {
            s.neg()
        } else {
            s
        }
    }

    /// Keeps the part of the angle whose order is prime to `l`. Identity for `Coeff::Zero`.
    pub fn reduce(&self, coeff: Coeff) -> Self {
        match coeff {
            Coeff::Zero => *self,
            Coeff::Mod(l) => {
                let (a, dprime) = l_adic_split(self.den, l);
                if dprime == 1 {
                    return Self::ZERO;
                }
                let la = (l as u128).pow(a) % dprime;
                let inv = inv_mod(la, dprime).expect("l is prime to the l-free part");
                Self::new(mul_mod(self.num, inv, dprime), dprime).unwrap()
            }
        }
    }

    pub fn admissible(&self, coeff: Coeff) -> bool {
        match coeff {
            Coeff::Zero => true,
            Coeff::Mod(l) => !self.den.is_multiple_of(l as u128),
        }
    }

    /// All `b` with `r * b = self` and `b` admissible for `coeff`, ascending.
    pub fn roots(&self, r: u128, coeff: Coeff) -> Vec<Self> {
        let mut out: Vec<Self> = (0..r)
            .map(|j| Self::new(self.num + j * self.den, r * self.den).unwrap())
            .filter(|b| b.admissible(coeff))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Angle of the residue class `a` of `F_l^x`, normalised so that the least
    /// primitive root has angle `1/(l-1)`.
    pub fn of_prime_field(a: u64, l: u64) -> Result<Self> {
        let k = discrete_log(a, l)?;
        Self::new(k as u128, (l - 1) as u128)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for RationalAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Angle(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let d: u128 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        let (neg, n) = match n.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, n),
        };
        let n: u128 = n.parse().map_err(|_| bad())?;
        let a = Self::new(n, d)?;
        Ok(if neg { a.neg() } else { a })
    }
}

impl TryFrom<String> for RationalAngle {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RationalAngle> for String {
    fn from(a: RationalAngle) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> RationalAngle {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_normalise() {
        assert_eq!(a("2/4"), RationalAngle::HALF);
        assert_eq!(a("-1/3"), a("2/3"));
        assert_eq!(a("5/4"), a("1/4"));
        assert_eq!(a("0"), RationalAngle::ZERO);
        assert!("1/0".parse::<RationalAngle>().is_err());
        assert_eq!(a("3/8").to_string(), "3/8");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(a("1/3").add(&a("1/6")), RationalAngle::HALF);
        assert_eq!(a("3/8").scale(2), a("3/4"));
        assert_eq!(a("1/5").scale_signed(-1), a("4/5"));
    }

    #[test]
    fn reduction_keeps_prime_to_l_part() {
        assert_eq!(RationalAngle::HALF.reduce(Coeff::Mod(2)), RationalAngle::ZERO);
        assert_eq!(RationalAngle::HALF.reduce(Coeff::Mod(3)), RationalAngle::HALF);
        // 1/6 = 1/2 + 2/3 ; the 3'-part is 1/2
        assert_eq!(a("1/6").reduce(Coeff::Mod(3)), RationalAngle::HALF);
        assert_eq!(a("1/6").reduce(Coeff::Mod(2)), a("2/3"));
    }

    #[test]
    fn roots_in_char_l() {
        let rs = RationalAngle::HALF.roots(4, Coeff::Mod(5));
        assert_eq!(rs, vec![a("1/8"), a("3/8"), a("5/8"), a("7/8")]);
        assert_eq!(RationalAngle::ZERO.roots(5, Coeff::Mod(5)), vec![RationalAngle::ZERO]);
        assert_eq!(RationalAngle::ZERO.roots(3, Coeff::Zero).len(), 3);
    }

    #[test]
    fn prime_field_angles() {
        assert_eq!(RationalAngle::of_prime_field(3, 5).unwrap(), a("3/4"));
        assert_eq!(RationalAngle::of_prime_field(4, 5).unwrap(), RationalAngle::HALF);
        assert_eq!(RationalAngle::of_prime_field(6, 7).unwrap(), RationalAngle::HALF);
    }
}
