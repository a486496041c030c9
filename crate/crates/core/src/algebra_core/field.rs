//! Prime fields F_p with machine-word residues.
//!
//! Square and cube roots are found by exhaustive search; the moduli used here
//! are tiny.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

pub fn reduce_i64(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeFieldElement {
    residue: u64,
    p: u64,
}

impl PrimeFieldElement {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { residue: reduce_i64(value, p), p })
    }

    /// Caller guarantees `p` prime.
    pub(crate) fn from_parts(residue: u64, p: u64) -> Self {
        Self { residue: residue % p, p }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        Self::from_parts((self.residue + o.residue) % self.p, self.p)
    }

    pub fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        Self::from_parts((self.residue + self.p - o.residue) % self.p, self.p)
    }

    pub fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        Self::from_parts(mul_mod(self.residue, o.residue, self.p), self.p)
    }

    pub fn neg(self) -> Self {
        Self::from_parts((self.p - self.residue) % self.p, self.p)
    }

    pub fn inv(self) -> Option<Self> {
        inv_mod(self.residue, self.p).map(|r| Self::from_parts(r, self.p))
    }

    /// Signed power; negative exponents need a nonzero base.
    pub fn pow(self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self };
        Some(Self::from_parts(pow_mod(base.residue, e.unsigned_abs(), self.p), self.p))
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

/// All r in F_p with r^k = a, in increasing order.
pub fn nth_roots(a: PrimeFieldElement, k: u64) -> Vec<PrimeFieldElement> {
    let p = a.p;
    (0..p)
        .filter(|&r| pow_mod(r, k, p) == a.residue)
        .map(|r| PrimeFieldElement::from_parts(r, p))
        .collect()
}

/// Smallest r with r^2 = a.
pub fn square_root(a: PrimeFieldElement) -> Option<PrimeFieldElement> {
    nth_roots(a, 2).into_iter().next()
}

pub fn is_square(a: PrimeFieldElement) -> bool {
    square_root(a).is_some()
}

/// Smallest r with r^3 = a.
pub fn cube_root(a: PrimeFieldElement) -> Option<PrimeFieldElement> {
    nth_roots(a, 3).into_iter().next()
}

pub fn has_cube_root(a: PrimeFieldElement) -> bool {
    cube_root(a).is_some()
}
