//! Prime-field arithmetic.
//!
//! Elements are plain `u32` values in `[0, q)`. The modulus is capped below
//! `2^31` so every product fits in a `u64` before reduction.

use crate::error::{Error, Result};

/// Largest modulus accepted by [`Field::new`] (exclusive).
pub const MODULUS_CAP: u64 = 1 << 31;

/// The prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    q: u32,
}

impl Field {
    /// Creates `F_q`, checking primality by trial division.
    pub fn new(q: u64) -> Result<Self> {
        if !(2..MODULUS_CAP).contains(&q) {
            return Err(Error::NotPrime(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field { q: q as u32 })
    }

    /// The smallest prime field with at least `min_q` elements.
    pub fn smallest_at_least(min_q: u64) -> Result<Self> {
        let mut candidate = min_q.max(2);
        while candidate < MODULUS_CAP {
            if is_prime(candidate) {
                return Ok(Field { q: candidate as u32 });
            }
            candidate += 1;
        }
        Err(Error::FieldSearchFailed { min_q })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// Reduces a signed integer into `[0, q)`.
    #[inline]
    pub fn elem(&self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let q = self.q as u64;
        (if s >= q { s - q } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.q as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let q = self.q as u64;
        let mut b = base as u64 % q;
        let mut acc = 1 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % q;
            }
            b = b * b % q;
            exp >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.q) {
            return Err(Error::DivideByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

/// Trial-division primality test.
pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    if v < 4 {
        return true;
    }
    if v.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
