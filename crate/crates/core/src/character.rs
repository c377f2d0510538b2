//! Characters of the cyclic groups `k_n^x`, in characteristic zero or `l`.
//!
//! A character is stored through its exponent on a fixed generator `g` of `k_n^x`:
//! its value at `g^k` is the root of unity with angle `exponent * k / modulus`.
//! Over `F_l`-bar only the prime-to-`l` part of `k_n^x` is visible, so the modulus
//! is the `l`-free part of `q^n - 1`. Generators are chosen norm-compatibly,
//! so the norm `k_n -> k_d` sends `g` to the generator of `k_d^x`.

use serde::{Deserialize, Serialize};

use crate::angle::RationalAngle;
use crate::arith::{
    gcd, group_order, inv_mod, is_prime, l_adic_split, mul_mod, PrimePower, DEFAULT_WIDTH_LIMIT,
};
use crate::error::{precondition, Error, Result};
use crate::finite::QuadResidueExt;

/// Coefficient field: `Q`-bar-like (`Zero`) or `F_l`-bar (`Mod(l)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coeff {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "l")]
    Mod(u64),
}

impl Coeff {
    pub fn ell(&self) -> Option<u64> {
        match self {
            Coeff::Zero => None,
            Coeff::Mod(l) => Some(*l),
        }
    }

    /// Rejects `l` that is not prime or equals the characteristic of `k`.
    pub fn validate(&self, q: u64) -> Result<()> {
        let p = PrimePower::new(q)?.p;
        if let Coeff::Mod(l) = *self {
            if !is_prime(l) {
                return Err(Error::NotPrime(l));
            }
            if l == p {
                return Err(Error::EllEqualsP { l, p });
            }
        }
        Ok(())
    }

    /// Size of the visible quotient of a cyclic group of order `order`.
    pub fn visible(&self, order: u128) -> u128 {
        match self {
            Coeff::Zero => order,
            Coeff::Mod(l) => l_adic_split(order, *l).1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCharacter", into = "RawCharacter")]
pub struct CyclicCharacter {
    q: u64,
    n: u64,
    coeff: Coeff,
    modulus: u128,
    exponent: u128,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCharacter {
    q: u64,
    n: u64,
    coeff: Coeff,
    exponent: u128,
}

impl TryFrom<RawCharacter> for CyclicCharacter {
    type Error = Error;
    fn try_from(r: RawCharacter) -> Result<Self> {
        CyclicCharacter::new(r.q, r.n, r.coeff, r.exponent)
    }
}

impl From<CyclicCharacter> for RawCharacter {
    fn from(c: CyclicCharacter) -> Self {
        RawCharacter { q: c.q, n: c.n, coeff: c.coeff, exponent: c.exponent }
    }
}

impl CyclicCharacter {
    pub fn new(q: u64, n: u64, coeff: Coeff, exponent: u128) -> Result<Self> {
        if n == 0 {
            return precondition("degree n must be positive");
        }
        coeff.validate(q)?;
        let modulus = coeff.visible(group_order(q, n, DEFAULT_WIDTH_LIMIT)?);
        if exponent >= modulus {
            return Err(Error::ExponentRange { exponent, modulus });
        }
        Ok(CyclicCharacter { q, n, coeff, modulus, exponent })
    }

    pub fn trivial(q: u64, n: u64, coeff: Coeff) -> Result<Self> {
        Self::new(q, n, coeff, 0)
    }

    fn with_exponent(&self, e: u128) -> Self {
        CyclicCharacter { exponent: e % self.modulus, ..self.clone() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn coeff(&self) -> Coeff {
        self.coeff
    }
    pub fn modulus(&self) -> u128 {
        self.modulus
    }
    pub fn exponent(&self) -> u128 {
        self.exponent
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> u128 {
        (self.q as u128).pow(self.n as u32) - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// Angle of the value at `g^k`.
    pub fn value_angle(&self, k: u128) -> RationalAngle {
        RationalAngle::new(mul_mod(self.exponent, k, self.modulus), self.modulus).unwrap()
    }

    pub fn order(&self) -> u128 {
        self.modulus / gcd(self.exponent, self.modulus)
    }

    /// `{e q^j mod M}`, in order of `j`.
    pub fn frobenius_orbit(&self) -> Vec<u128> {
        let mut orbit = vec![self.exponent];
        let mut e = mul_mod(self.exponent, self.q as u128, self.modulus);
        while e != self.exponent {
            orbit.push(e);
            e = mul_mod(e, self.q as u128, self.modulus);
        }
        orbit
    }

    pub fn orbit_size(&self) -> u64 {
        let mut e = self.exponent;
        for j in 1..=self.n {
            e = mul_mod(e, self.q as u128, self.modulus);
            if e == self.exponent {
                return j;
            }
        }
        unreachable!("q^n acts trivially")
    }

    pub fn is_regular(&self) -> bool {
        self.orbit_size() == self.n
    }

    /// The orbit representative with least exponent.
    pub fn canonical(&self) -> Self {
        let e = *self.frobenius_orbit().iter().min().unwrap();
        self.with_exponent(e)
    }

    pub fn same_orbit(&self, other: &Self) -> bool {
        self.q == other.q
            && self.n == other.n
            && self.coeff == other.coeff
            && self.frobenius_orbit().contains(&other.exponent)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if (self.q, self.n, self.coeff) != (other.q, other.n, other.coeff) {
            return precondition("characters live on different groups");
        }
        Ok(self.with_exponent(crate::arith::add_mod(self.exponent, other.exponent, self.modulus)))
    }

    pub fn inverse(&self) -> Self {
        self.with_exponent((self.modulus - self.exponent) % self.modulus)
    }

    pub fn pow(&self, k: u128) -> Self {
        self.with_exponent(mul_mod(self.exponent, k, self.modulus))
    }

    /// Reduction modulo `l` of a characteristic-zero character.
    pub fn reduce_mod_l(&self, l: u64) -> Result<Self> {
        if self.coeff != Coeff::Zero {
            return precondition("reduction applies to characteristic-zero characters");
        }
        let target = Coeff::Mod(l);
        target.validate(self.q)?;
        let (a, nprime) = l_adic_split(self.modulus, l);
        let la = (l as u128).pow(a) % nprime.max(1);
        let x = if nprime == 1 { 0 } else { mul_mod(self.exponent, inv_mod(la, nprime)?, nprime) };
        Self::new(self.q, self.n, target, x)
    }

    /// All characteristic-zero characters reducing to `self`, ascending.
    pub fn lifts(&self) -> Result<Vec<Self>> {
        let Coeff::Mod(l) = self.coeff else {
            return precondition("lifts apply to modular characters");
        };
        let n_full = self.group_order();
        let (a, nprime) = l_adic_split(n_full, l);
        let la = (l as u128).pow(a);
        let base = mul_mod(self.exponent, la, nprime);
        let mut out = Vec::with_capacity(la as usize);
        for t in 0..la {
            out.push(Self::new(self.q, self.n, Coeff::Zero, base + nprime * t)?);
        }
        Ok(out)
    }

    /// Whether the restriction to `k_d^x` is trivial.
    pub fn is_trivial_on_subfield(&self, d: u64) -> Result<bool> {
        Ok(self.restrict_to_subfield(d)?.is_trivial())
    }

    /// Restriction to the subgroup of `k_n^x` of order `order`.
    pub fn trivial_on_subgroup(&self, order: u128) -> Result<bool> {
        let full = self.group_order();
        if order == 0 || !full.is_multiple_of(order) {
            return precondition(format!("{order} does not divide {full}"));
        }
        Ok(self.value_angle(full / order).is_zero())
    }

    /// Restriction to `k_d^x`, as a character on the generator `g^{(q^n-1)/(q^d-1)}`.
    pub fn restrict_to_subfield(&self, d: u64) -> Result<Self> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, n: self.n });
        }
        let full_d = group_order(self.q, d, DEFAULT_WIDTH_LIMIT)?;
        let angle = self.value_angle(self.group_order() / full_d);
        let m_d = self.coeff.visible(full_d);
        if !m_d.is_multiple_of(angle.den()) {
            return Err(Error::Invariant("restriction angle outside k_d".into()));
        }
        Self::new(self.q, d, self.coeff, angle.num() * (m_d / angle.den()))
    }

    /// `theta` on `k_d^x` with `self = theta o N_{k_n/k_d}`, if one exists.
    pub fn factor_through_norm(&self, d: u64) -> Result<Option<Self>> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, n: self.n });
        }
        let m_d = self.coeff.visible(group_order(self.q, d, DEFAULT_WIDTH_LIMIT)?);
        let index = self.modulus / m_d;
        if !self.exponent.is_multiple_of(index) {
            return Ok(None);
        }
        Ok(Some(Self::new(self.q, d, self.coeff, self.exponent / index)?))
    }

    /// `self o N_{k_big/k_n}` on `k_big^x` where `big = n * factor`.
    pub fn inflate(&self, factor: u64) -> Result<Self> {
        let big = self.n * factor;
        let m_big = self.coeff.visible(group_order(self.q, big, DEFAULT_WIDTH_LIMIT)?);
        Self::new(self.q, big, self.coeff, self.exponent * (m_big / self.modulus))
    }

    /// `x -> chi(sigma(x))^{-1}`.
    pub fn sigma_dual(&self, ext: &QuadResidueExt) -> Result<Self> {
        if ext.q() != self.q {
            return precondition(format!("residue field of size {} expected, got {}", ext.q(), self.q));
        }
        let m = self.modulus;
        let e = if ext.ramified {
            (m - self.exponent) % m
        } else {
            (m - mul_mod(self.exponent, ext.q0 as u128, m)) % m
        };
        Ok(self.with_exponent(e))
    }
}
