//! Integer arithmetic on cyclic groups: orders, l-adic splittings, Mobius sums.

use crate::error::{Error, Result};

/// Largest permitted `q^n - 1`.
pub const DEFAULT_WIDTH_LIMIT: u128 = (1u128 << 127) - 1;

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= 1 {
        return 0;
    }
    let (a, b) = (a % m, b % m);
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    let (mut acc, mut x, mut y) = (0u128, a, b);
    while y > 0 {
        if y & 1 == 1 {
            acc = add_mod(acc, x, m);
        }
        x = add_mod(x, x, m);
        y >>= 1;
    }
    acc
}

pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (a, b) = (a % m, b % m);
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

pub fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    add_mod(a, m - b % m, m)
}

pub fn pow_mod(b: u128, mut e: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let (mut acc, mut x) = (1u128, b % m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, x, m);
        }
        x = mul_mod(x, x, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`.
pub fn inv_mod(a: u128, m: u128) -> Result<u128> {
    if m == 1 {
        return Ok(0);
    }
    let m_signed = i128::try_from(m).map_err(|_| Error::NotCoprime { value: a, modulus: m })?;
    let (mut r0, mut r1) = (m_signed, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { value: a, modulus: m });
    }
    Ok(t0.rem_euclid(m_signed) as u128)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization.
pub fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    ds.sort_unstable();
    ds
}

pub fn mobius(n: u64) -> i8 {
    let mut sign = 1i8;
    for (_, k) in factorize(n as u128) {
        if k > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// An odd prime power `q = p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        let f = factorize(q as u128);
        if q < 2 || f.len() != 1 {
            return Err(Error::NotPrimePower(q));
        }
        let (p, k) = f[0];
        if p == 2 {
            return Err(Error::EvenCharacteristic(q));
        }
        Ok(PrimePower { p: p as u64, k })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// `q^n - 1`, refusing values above `limit`.
pub fn group_order(q: u64, n: u64, limit: u128) -> Result<u128> {
    let qn = (q as u128)
        .checked_pow(n as u32)
        .filter(|_| n <= u32::MAX as u64)
        .ok_or(Error::Overflow { q, n })?;
    let m = qn - 1;
    if m > limit {
        return Err(Error::Overflow { q, n });
    }
    Ok(m)
}

/// Multiplicative order of `b` modulo `m`.
pub fn mult_order(b: u128, m: u128) -> Result<u128> {
    if gcd(b, m) != 1 {
        return Err(Error::NotCoprime { value: b, modulus: m });
    }
    if m == 1 {
        return Ok(1);
    }
    let mut phi = 1u128;
    for (p, k) in factorize(m) {
        phi *= (p - 1) * p.pow(k - 1);
    }
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord.is_multiple_of(p) && pow_mod(b, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Writes `n = l^a * n'` with `l` not dividing `n'`.
pub fn l_adic_split(mut n: u128, l: u64) -> (u32, u128) {
    let l = l as u128;
    let mut a = 0;
    while n != 0 && n.is_multiple_of(l) {
        n /= l;
        a += 1;
    }
    (a, n)
}

/// Number of Frobenius orbits of size exactly `n` on characters of `k_n^x`.
pub fn regular_orbit_count(q: u64, n: u64) -> Result<u128> {
    group_order(q, n, DEFAULT_WIDTH_LIMIT)?;
    let mut total: i128 = 0;
    for d in divisors(n) {
        let mu = mobius(d) as i128;
        if mu != 0 {
            total += mu * ((q as u128).pow((n / d) as u32) - 1) as i128;
        }
    }
    Ok((total / n as i128) as u128)
}

/// Least primitive root modulo a prime `l`.
pub fn primitive_root(l: u64) -> Result<u64> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if l == 2 {
        return Ok(1);
    }
    (2..l)
        .find(|&g| mult_order(g as u128, l as u128) == Ok((l - 1) as u128))
        .ok_or(Error::Invariant(format!("no primitive root mod {l}")))
}

/// Discrete logarithm of `a` to the least primitive root modulo `l`.
pub fn discrete_log(a: u64, l: u64) -> Result<u64> {
    let g = primitive_root(l)?;
    let a = a % l;
    if a == 0 {
        return Err(Error::NotCoprime { value: 0, modulus: l as u128 });
    }
    let mut x = 1u64;
    for k in 0..l - 1 {
        if x == a {
            return Ok(k);
        }
        x = x * g % l;
    }
    Err(Error::Invariant("discrete log not found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(b: u128, m: u128) -> u128 {
        (1..=m).find(|&k| pow_mod(b, k, m) == 1 % m).unwrap()
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(regular_orbit_count(3, 2).unwrap(), 3);
        assert_eq!(regular_orbit_count(5, 2).unwrap(), 10);
        assert_eq!(regular_orbit_count(3, 4).unwrap(), 18);
        assert_eq!(regular_orbit_count(7, 1).unwrap(), 6);
    }

    #[test]
    fn split_examples() {
        assert_eq!(l_adic_split(24, 3), (1, 8));
        assert_eq!(l_adic_split(80, 2), (4, 5));
        assert_eq!(l_adic_split(7, 3), (0, 7));
    }

    #[test]
    fn orders_match_brute_force() {
        for m in 2..200u128 {
            for b in 1..m {
                if gcd(b, m) == 1 {
                    assert_eq!(mult_order(b, m).unwrap(), brute_order(b, m), "{b} mod {m}");
                }
            }
        }
        assert_eq!(mult_order(6, 9), Err(Error::NotCoprime { value: 6, modulus: 9 }));
    }

    #[test]
    fn inverses() {
        for m in 2..120u128 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    assert_eq!(mul_mod(inv_mod(a, m).unwrap(), a, m), 1);
                }
            }
        }
        let big = DEFAULT_WIDTH_LIMIT;
        let x = inv_mod(3, big).unwrap();
        assert_eq!(mul_mod(x, 3, big), 1);
    }

    #[test]
    fn wide_multiplication() {
        let m = (1u128 << 100) + 7;
        let a = (1u128 << 99) + 12345;
        assert_eq!(mul_mod(a, 2, m), (2 * a) % m);
        assert_eq!(pow_mod(2, 100, m), m - 7);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(PrimePower::new(9).unwrap(), PrimePower { p: 3, k: 2 });
        assert!(matches!(PrimePower::new(8), Err(Error::EvenCharacteristic(8))));
        assert!(matches!(PrimePower::new(12), Err(Error::NotPrimePower(12))));
        assert!(matches!(group_order(9, 200, DEFAULT_WIDTH_LIMIT), Err(Error::Overflow { .. })));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i8> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn logs() {
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(discrete_log(3, 5).unwrap(), 3);
        assert_eq!(primitive_root(7).unwrap(), 3);
    }
}
