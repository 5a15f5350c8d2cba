//! Arithmetic in ℤ/pᴺ on `u64` representatives.

use crate::error::{Error, Result};

/// The ring ℤ/pᴺ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpn {
    p: u64,
    n: u32,
    q: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn int_val(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Largest e with pᵉ ≤ k.
pub fn floor_log(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut t = p;
    while t <= k {
        e += 1;
        t = t.saturating_mul(p);
    }
    e
}

impl Zpn {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidInput("precision N must be positive".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q
                .checked_mul(p)
                .filter(|&q| q < (1u64 << 62))
                .ok_or_else(|| Error::InvalidInput(format!("{p}^{n} exceeds 2^62")))?;
        }
        Ok(Zpn { p, n, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn with_n(&self, n: u32) -> Result<Self> {
        Zpn::new(self.p, n)
    }

    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.n {
            return 0;
        }
        self.p.pow(k)
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }
    #[inline]
    pub fn from_u64(&self, x: u64) -> u64 {
        x % self.q
    }
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }
    /// a + b·c
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        ((a as u128 + b as u128 * c as u128) % self.q as u128) as u64
    }
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Valuation, with N for zero.
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            self.n
        } else {
            int_val(a, self.p)
        }
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.q as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        Some(t0.rem_euclid(self.q as i128) as u64)
    }

    /// a / pᵏ as an integer; requires pᵏ | a.
    pub fn div_p_pow(&self, a: u64, k: u32) -> u64 {
        let d = self.p.pow(k);
        debug_assert!(a % d == 0);
        a / d
    }

    /// Splits a nonzero a as pᵛ·u with u a unit.
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.val(a);
        if v >= self.n {
            return (self.n, 0);
        }
        (v, a / self.p.pow(v))
    }

    /// Symmetric representative in (−q/2, q/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.q / 2 {
            a as i64 - self.q as i64
        } else {
            a as i64
        }
    }
}
