//! The prime field F_p for a small prime p.
//!
//! Scalars are plain `u32` values kept in `[0, p)`; all operations go through
//! a [`Prime`] context. Because the residue field is F_p itself, the p-th
//! power map is the identity on scalars, so p-th roots are free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUPPORTED: &[u32] = &[2, 3, 5, 7, 11, 13];

/// A small prime modulus, 2 <= p <= 13.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if SUPPORTED.contains(&p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidInput(format!(
                "p = {p} is not a prime in the supported range 2..=13"
            )))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.0
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, c: i64) -> u32 {
        c.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.0
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        base %= self.0;
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero in F_{}", self.0);
        self.pow(a, self.0 - 2)
    }

    /// Inverse of a small nonnegative integer such as a factorial.
    pub fn inv_int(self, a: u64) -> u32 {
        self.inv((a % self.0 as u64) as u32)
    }
}

/// binom(n, k) mod p via Lucas' theorem; n and k may exceed p^2.
pub fn binomial_mod(p: Prime, mut n: u64, mut k: u64) -> u32 {
    let q = p.p() as u64;
    let mut acc = 1u32;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % q, k % q);
        if kd > nd {
            return 0;
        }
        // digits are < 13, so the integer binomial fits easily
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..kd {
            num *= nd - i;
            den *= i + 1;
        }
        acc = p.mul(acc, p.reduce((num / den) as i64));
        n /= q;
        k /= q;
    }
    acc
}

/// binom(p, i)/p as an exact integer, reduced mod p. Requires 1 <= i <= p-1.
pub fn binom_p_over_p(p: Prime, i: u32) -> Result<u32> {
    if i == 0 || i >= p.p() {
        return Err(Error::InvalidInput(format!(
            "binom(p,i)/p needs 1 <= i <= p-1, got i = {i} for p = {}",
            p.p()
        )));
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for j in 0..i as u64 {
        num *= p.p() as u64 - j;
        den *= j + 1;
    }
    Ok(p.reduce((num / den / p.p() as u64) as i64))
}
