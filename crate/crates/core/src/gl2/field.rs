//! `GF(p^k)` with log/antilog tables. Elements are base-`p` digit strings packed into `u32`.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    modulus: Vec<u32>,
}

impl FiniteField {
    /// Builds `GF(p^k)` from the lexicographically first primitive polynomial.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        let size = p
            .checked_pow(k)
            .filter(|s| *s <= 1 << 20)
            .ok_or_else(|| Error::Precondition(format!("field of size {p}^{k} is too large")))?;
        let order = size - 1;
        for code in 0..size {
            let low = digits(code, p, k);
            if low[0] == 0 {
                continue;
            }
            if let Some(exp) = power_table(&low, p, k, order) {
                let mut log = vec![u32::MAX; size as usize];
                for (j, &x) in exp.iter().enumerate() {
                    log[x as usize] = j as u32;
                }
                return Ok(FiniteField { p, k, size, exp, log, modulus: low });
            }
        }
        Err(Error::Invariant(format!("no primitive polynomial of degree {k} over F_{p}")))
    }

    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    /// Low coefficients of the defining polynomial `x^k + ...`.
    pub fn defining_polynomial(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> u32 {
        0
    }
    pub fn one(&self) -> u32 {
        1
    }

    /// `g^j` for the fixed generator `g`.
    pub fn gen_pow(&self, j: u64) -> u32 {
        self.exp[(j % (self.size as u64 - 1)) as usize]
    }

    pub fn log(&self, x: u32) -> Option<u64> {
        match self.log[x as usize] {
            u32::MAX => None,
            j => Some(j as u64),
        }
    }

    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match (self.log(a), self.log(b)) {
            (Some(x), Some(y)) => self.gen_pow(x + y),
            _ => 0,
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        self.log(a).map(|x| self.gen_pow(self.size as u64 - 1 - x))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` by repeated squaring on the field multiplication.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut acc, mut x) = (1u32, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size
    }
}

fn digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

fn pack(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Powers of `x` modulo `x^k + low`, if `x` has order exactly `order`.
fn power_table(low: &[u32], p: u32, k: u32, order: u32) -> Option<Vec<u32>> {
    let k = k as usize;
    let mut cur = vec![0u32; k];
    cur[0] = 1;
    let mut exp = Vec::with_capacity(order as usize);
    for j in 0..order {
        let code = pack(&cur, p);
        if j > 0 && code == 1 {
            return None;
        }
        exp.push(code);
        let top = cur[k - 1];
        for i in (1..k).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..k {
            cur[i] = (cur[i] + (p - low[i]) * top) % p;
        }
    }
    (pack(&cur, p) == 1).then_some(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(3, 1), (3, 2), (5, 2), (3, 4), (7, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            let els: Vec<u32> = f.elements().collect();
            assert_eq!(els.len() as u32, p.pow(k));
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for &b in els.iter().step_by(3) {
                    for &c in els.iter().step_by(5) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            // Frobenius is additive
            for &a in &els {
                for &b in els.iter().step_by(7) {
                    assert_eq!(f.pow(f.add(a, b), p as u64), f.add(f.pow(a, p as u64), f.pow(b, p as u64)));
                }
            }
        }
    }

    #[test]
    fn prime_field_is_integers_mod_p() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.add(4, 5), 2);
        assert_eq!(f.from_int(-1), 6);
    }
}
