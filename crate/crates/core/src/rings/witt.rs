//! W(F_q) mod pᴺ as ℤ/pᴺ[x]/(m(x)) with the Frobenius lift x ↦ F(x).

use crate::error::{Error, Result};
use crate::modp::Zpn;

/// Polynomials over F_p, low degree first, no trailing zeros.
mod fp {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn inv(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b, p);
            }
            b = mulmod(b, b, p);
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while a.len() > dm {
            let d = a.len() - 1;
            let c = mulmod(a[d], lead_inv, p);
            for (i, &mi) in m.iter().enumerate() {
                let j = d - dm + i;
                a[j] = (a[j] + p - mulmod(c, mi, p)) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1];
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    /// Rabin's irreducibility test for a monic m of degree f.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let f = m.len() - 1;
        let x = vec![0, 1];
        // x^{p^k} mod m by repeated p-th powers
        let frob_pow = |k: usize| {
            let mut y = rem(&x, m, p);
            for _ in 0..k {
                y = powmod(&y, p, m, p);
            }
            y
        };
        if !sub(&frob_pow(f), &rem(&x, m, p), p).is_empty() {
            return false;
        }
        for (l, _) in crate::abelian::factorize(f as u64) {
            let d = sub(&frob_pow(f / l as usize), &x, p);
            if gcd(m, &d, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub(crate) struct WittBase {
    r: Zpn,
    f: usize,
    minpoly: Vec<u64>,
    /// red[k] = x^k reduced, for k < 2f − 1.
    red: Vec<Vec<u64>>,
    frob: Vec<Vec<u64>>,
    q: u64,
}

/// First monic irreducible polynomial of degree f over F_p, ordering
/// candidates by the integer Σ cᵢ pⁱ of their lower coefficients.
pub(crate) fn conway_free_minpoly(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    let total = p.pow(f as u32);
    for idx in 0..total {
        let mut m: Vec<u64> = (0..f).map(|i| (idx / p.pow(i as u32)) % p).collect();
        m.push(1);
        if m[0] != 0 && fp::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl WittBase {
    pub fn new(r: Zpn, f: usize) -> Result<Self> {
        let p = r.p();
        let q = (p as u128).pow(f as u32);
        if q >= 1 << 63 {
            return Err(Error::Unsupported(format!("residue field of size {p}^{f}")));
        }
        let minpoly = conway_free_minpoly(p, f);
        let mut red = Vec::with_capacity(2 * f);
        for k in 0..(2 * f).max(1) {
            let v = if k < f {
                let mut e = vec![0; f];
                e[k] = 1;
                e
            } else {
                // x^k = x · x^{k−1}, then x^f = −Σ mᵢ xⁱ
                let prev: &Vec<u64> = &red[k - 1];
                let top = prev[f - 1];
                let mut e = vec![0; f];
                for i in (1..f).rev() {
                    e[i] = prev[i - 1];
                }
                for i in 0..f {
                    e[i] = r.sub(e[i], r.mul(top, minpoly[i]));
                }
                e
            };
            red.push(v);
        }
        let mut w = WittBase { r, f, minpoly, red, frob: Vec::new(), q: q as u64 };
        w.frob = w.compute_frobenius()?;
        Ok(w)
    }

    pub fn minpoly(&self) -> &[u64] {
        &self.minpoly
    }

    pub fn frob(&self) -> &[Vec<u64>] {
        &self.frob
    }

    /// acc += a·b as polynomials (length 2f − 1).
    pub fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        let r = &self.r;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc[i + j] = r.mul_add(acc[i + j], x, y);
                }
            }
        }
    }

    pub fn reduce(&self, acc: &[u64]) -> Vec<u64> {
        let r = &self.r;
        let mut out = acc[..self.f].to_vec();
        for (k, &c) in acc.iter().enumerate().skip(self.f) {
            if c != 0 {
                for (o, &e) in out.iter_mut().zip(&self.red[k]) {
                    *o = r.mul_add(*o, c, e);
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; 2 * self.f - 1];
        self.mul_acc(&mut acc, a, b);
        self.reduce(&acc)
    }

    fn one(&self) -> Vec<u64> {
        let mut e = vec![0; self.f];
        e[0] = 1;
        e
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        a.iter().any(|&x| x % self.r.p() != 0)
    }

    pub fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        if !self.is_unit(a) {
            return None;
        }
        let mut v = self.pow(a, self.q - 2);
        let two = {
            let mut t = vec![0; self.f];
            t[0] = self.r.from_u64(2);
            t
        };
        for _ in 0..=(64 - u64::from(self.r.n()).leading_zeros()) + 1 {
            let av = self.mul(a, &v);
            let d: Vec<u64> = two.iter().zip(&av).map(|(&x, &y)| self.r.sub(x, y)).collect();
            v = self.mul(&v, &d);
        }
        (self.mul(a, &v) == self.one()).then_some(v)
    }

    fn eval_minpoly(&self, x: &[u64], deriv: bool) -> Vec<u64> {
        let r = &self.r;
        let mut acc = vec![0u64; self.f];
        let deg = self.f;
        for k in (0..=deg).rev() {
            let c = if deriv {
                if k == 0 {
                    continue;
                }
                r.mul(self.minpoly[k], r.from_u64(k as u64))
            } else {
                self.minpoly[k]
            };
            acc = self.mul(&acc, x);
            acc[0] = r.add(acc[0], c);
        }
        acc
    }

    fn compute_frobenius(&self) -> Result<Vec<Vec<u64>>> {
        let f = self.f;
        if f == 1 {
            return Ok(vec![vec![1]]);
        }
        let mut x = vec![0; f];
        x[1] = 1;
        let mut root = self.pow(&x, self.r.p());
        for _ in 0..=(64 - u64::from(self.r.n()).leading_zeros()) + 1 {
            let val = self.eval_minpoly(&root, false);
            let der = self.eval_minpoly(&root, true);
            let inv = self.inverse(&der).ok_or_else(|| Error::Verification("inseparable minimal polynomial".into()))?;
            let step = self.mul(&val, &inv);
            root = root.iter().zip(&step).map(|(&a, &b)| self.r.sub(a, b)).collect();
        }
        if self.eval_minpoly(&root, false).iter().any(|&c| c != 0) {
            return Err(Error::Verification("Frobenius lift did not converge".into()));
        }
        Ok((0..f).map(|b| self.pow(&root, b as u64)).collect())
    }

    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        let r = &self.r;
        let mut out = vec![0u64; self.f];
        for (b, &c) in a.iter().enumerate() {
            if c != 0 {
                for (o, &e) in out.iter_mut().zip(&self.frob[b]) {
                    *o = r.mul_add(*o, c, e);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomials() {
        assert_eq!(conway_free_minpoly(2, 2), vec![1, 1, 1]);
        assert_eq!(conway_free_minpoly(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(conway_free_minpoly(3, 2), vec![1, 0, 1]);
        assert!(!fp::is_irreducible(&[1, 0, 1], 2));
        assert!(fp::is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(!fp::is_irreducible(&[1, 0, 1, 0, 1], 2));
    }
}
