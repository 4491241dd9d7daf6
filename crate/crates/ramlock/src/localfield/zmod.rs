//! Arithmetic in Z/p^N for moduli below 2^126.

use crate::error::{Error, Result};

/// Largest modulus bit length accepted. Keeps `a + b` and `2a` inside `u128`.
pub const MAX_MODULUS_BITS: u32 = 126;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    p: u64,
    digits: u32,
    m: u128,
    pows: Vec<u128>,
}

impl Modulus {
    pub fn new(p: u64, digits: u32) -> Result<Self> {
        let mut pows = Vec::with_capacity(digits as usize + 1);
        let mut acc: u128 = 1;
        pows.push(acc);
        for _ in 0..digits {
            acc = acc
                .checked_mul(p as u128)
                .filter(|v| *v < (1u128 << MAX_MODULUS_BITS))
                .ok_or_else(|| {
                    Error::PrecisionExhausted(format!(
                        "{p}^{digits} exceeds the supported modulus size (2^{MAX_MODULUS_BITS})"
                    ))
                })?;
            pows.push(acc);
        }
        Ok(Modulus { p, digits, m: acc, pows })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn digits(&self) -> u32 {
        self.digits
    }

    #[inline]
    pub fn value(&self) -> u128 {
        self.m
    }

    /// p^k for k <= digits.
    #[inline]
    pub fn pow_p(&self, k: u32) -> u128 {
        self.pows[k as usize]
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.m - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.m <= u32::MAX as u128 {
            ((a as u64 * b as u64) % self.m as u64) as u128
        } else if self.m <= u64::MAX as u128 {
            (a * b) % self.m
        } else {
            self.mul_wide(a, b)
        }
    }

    fn mul_wide(&self, a: u128, b: u128) -> u128 {
        // a, b < 2^126: split b into 32-bit limbs is not enough headroom, so
        // fall back to shift-and-add.
        let mut r: u128 = 0;
        let bits = 128 - b.leading_zeros();
        for i in (0..bits).rev() {
            r = self.add(r, r);
            if (b >> i) & 1 == 1 {
                r = self.add(r, a);
            }
        }
        r
    }

    pub fn from_i128(&self, x: i128) -> u128 {
        let m = self.m as i128;
        let r = x.rem_euclid(m);
        r as u128
    }

    /// Balanced representative in (-m/2, m/2].
    pub fn to_signed(&self, a: u128) -> i128 {
        if a > self.m / 2 {
            a as i128 - self.m as i128
        } else {
            a as i128
        }
    }

    /// p-adic valuation of a residue; `digits` for zero.
    pub fn val(&self, a: u128) -> u32 {
        if a == 0 {
            return self.digits;
        }
        let p = self.p as u128;
        let mut v = 0;
        let mut x = a;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    }

    /// Exact division of a multiple of p^k by p^k. Upper digits become zero.
    #[inline]
    pub fn div_pow_p(&self, a: u128, k: u32) -> u128 {
        debug_assert!(a % self.pows[k as usize] == 0);
        a / self.pows[k as usize]
    }

    /// Reduction mod p^k, k <= digits.
    #[inline]
    pub fn trunc(&self, a: u128, k: u32) -> u128 {
        if k >= self.digits {
            a
        } else {
            a % self.pows[k as usize]
        }
    }

    pub fn pow(&self, a: u128, mut e: u128) -> u128 {
        let mut base = a;
        let mut acc = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit residue.
    pub fn inv(&self, a: u128) -> Option<u128> {
        if a % self.p as u128 == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.m as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.from_i128(s0))
    }
}
