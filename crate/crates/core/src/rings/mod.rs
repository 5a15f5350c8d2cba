//! Truncated models of p-adic coefficient rings with a Frobenius lift.
//!
//! Unramified extensions W of ℤ_p of degree f are ℤ/pᴺ[x]/(m(x)); series rings
//! keep the coefficients of T^k for k in a degree window.

mod analysis;
mod witt;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use analysis::{
    coinvariants, compare_coinvariants, compare_window_stable, exact_sequence_defect,
    frobenius_fixed_units, scalar_log_l, tensor_with_finite, Coinvariants, ComparisonReport,
    CoinvariantVerdict, FixedUnits,
};

use crate::error::{Error, Result};
use crate::modp::Zpn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    Zp,
    Witt,
    PowerSeries,
    Laurent,
    InverseVar,
}

fn one() -> usize {
    1
}

/// Ring model parameters; series models have base ring W of degree f.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub kind: RingKind,
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(default = "one")]
    pub f: usize,
    #[serde(rename = "D", default)]
    pub d: usize,
}

impl RingDescriptor {
    pub fn zp(p: u64, n: u32) -> Self {
        RingDescriptor { kind: RingKind::Zp, p, n, f: 1, d: 0 }
    }
    pub fn witt(p: u64, f: usize, n: u32) -> Self {
        RingDescriptor { kind: RingKind::Witt, p, n, f, d: 0 }
    }
    pub fn power_series(p: u64, f: usize, n: u32, d: usize) -> Self {
        RingDescriptor { kind: RingKind::PowerSeries, p, n, f, d }
    }
    pub fn laurent(p: u64, f: usize, n: u32, d: usize) -> Self {
        RingDescriptor { kind: RingKind::Laurent, p, n, f, d }
    }
    pub fn inverse_var(p: u64, f: usize, n: u32, d: usize) -> Self {
        RingDescriptor { kind: RingKind::InverseVar, p, n, f, d }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let d: RingDescriptor = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn with_precision(&self, n: u32) -> Self {
        RingDescriptor { n, ..self.clone() }
    }

    pub fn with_window(&self, d: usize) -> Self {
        RingDescriptor { d, ..self.clone() }
    }

    /// Rank of the base ring W over ℤ_p.
    pub fn base_rank(&self) -> usize {
        match self.kind {
            RingKind::Zp => 1,
            _ => self.f,
        }
    }

    /// Inclusive degree window.
    pub fn window(&self) -> (i64, i64) {
        let d = self.d as i64;
        match self.kind {
            RingKind::Zp | RingKind::Witt => (0, 0),
            RingKind::PowerSeries => (0, d),
            RingKind::Laurent => (-d, d),
            RingKind::InverseVar => (-d, 0),
        }
    }

    pub fn is_series(&self) -> bool {
        matches!(self.kind, RingKind::PowerSeries | RingKind::Laurent | RingKind::InverseVar)
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::modp::is_prime(self.p) {
            return Err(Error::InvalidInput(format!("{} is not prime", self.p)));
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("precision N must be positive".into()));
        }
        if self.kind == RingKind::Zp && self.f != 1 {
            return Err(Error::InvalidInput("the ℤ_p model has f = 1".into()));
        }
        if self.f == 0 || self.f > 8 {
            return Err(Error::InvalidInput(format!("residue degree f = {} outside 1..=8", self.f)));
        }
        if self.d > 4096 {
            return Err(Error::InvalidInput("degree window too large".into()));
        }
        Zpn::new(self.p, self.n)?;
        Ok(())
    }

    pub fn label(&self) -> String {
        let base = if self.base_rank() == 1 { "Zp".to_string() } else { format!("W{}", self.f) };
        match self.kind {
            RingKind::Zp | RingKind::Witt => base,
            RingKind::PowerSeries => format!("{base}[[t]]"),
            RingKind::Laurent => format!("{base}{{{{t}}}}"),
            RingKind::InverseVar => format!("{base}<<1/t>>"),
        }
    }
}

/// An element: coordinates indexed by (degree − lo)·f + base coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    pub coords: Vec<u64>,
}

/// A concrete ring model with arithmetic mod pᴺ.
#[derive(Clone, Debug)]
pub struct RingModel {
    desc: RingDescriptor,
    r: Zpn,
    f: usize,
    lo: i64,
    hi: i64,
    witt: witt::WittBase,
}

impl RingModel {
    pub fn new(desc: &RingDescriptor) -> Result<Self> {
        desc.validate()?;
        let r = Zpn::new(desc.p, desc.n)?;
        let f = desc.base_rank();
        let (lo, hi) = desc.window();
        let witt = witt::WittBase::new(r, f)?;
        Ok(RingModel { desc: desc.clone(), r, f, lo, hi, witt })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.desc
    }

    pub fn zpn(&self) -> &Zpn {
        &self.r
    }

    pub fn p(&self) -> u64 {
        self.r.p()
    }

    pub fn n(&self) -> u32 {
        self.r.n()
    }

    pub fn base_rank(&self) -> usize {
        self.f
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn dim(&self) -> usize {
        self.f * (self.hi - self.lo + 1) as usize
    }

    /// The minimal polynomial of the base (low to high, monic).
    pub fn minimal_polynomial(&self) -> &[u64] {
        self.witt.minpoly()
    }

    /// Column b is F(x^b) in the base.
    pub fn base_frobenius(&self) -> &[Vec<u64>] {
        self.witt.frob()
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coords: vec![0; self.dim()] }
    }

    pub fn from_int(&self, c: i64) -> RingElement {
        let mut e = self.zero();
        e.coords[self.index(0, 0)] = self.r.from_i64(c);
        e
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    /// Basis vector: x^b·T^k.
    pub fn basis(&self, k: i64, b: usize) -> RingElement {
        let mut e = self.zero();
        e.coords[self.index(k, b)] = 1;
        e
    }

    /// Element from base coordinates at degree k.
    pub fn monomial(&self, k: i64, base: &[u64]) -> RingElement {
        let mut e = self.zero();
        for (b, &c) in base.iter().enumerate() {
            e.coords[self.index(k, b)] = self.r.from_u64(c);
        }
        e
    }

    pub fn index(&self, k: i64, b: usize) -> usize {
        assert!(k >= self.lo && k <= self.hi && b < self.f, "index outside the window");
        (k - self.lo) as usize * self.f + b
    }

    pub fn in_window(&self, k: i64) -> bool {
        k >= self.lo && k <= self.hi
    }

    /// Base coefficient of T^k.
    pub fn coeff<'a>(&self, a: &'a RingElement, k: i64) -> &'a [u64] {
        let i = self.index(k, 0);
        &a.coords[i..i + self.f]
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.r.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.r.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement { coords: a.coords.iter().map(|&x| self.r.neg(x)).collect() }
    }

    pub fn scale(&self, a: &RingElement, c: u64) -> RingElement {
        RingElement { coords: a.coords.iter().map(|&x| self.r.mul(x, c)).collect() }
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.coords.iter().all(|&x| x == 0)
    }

    /// Exact product truncated to the window.
    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = self.f;
        let mut out = self.zero();
        let mut acc = vec![0u64; 2 * f - 1];
        let nz_a: Vec<i64> = (self.lo..=self.hi).filter(|&k| self.coeff(a, k).iter().any(|&x| x != 0)).collect();
        let nz_b: Vec<i64> = (self.lo..=self.hi).filter(|&k| self.coeff(b, k).iter().any(|&x| x != 0)).collect();
        for deg in self.lo..=self.hi {
            acc.iter_mut().for_each(|x| *x = 0);
            let mut any = false;
            for &i in &nz_a {
                let j = deg - i;
                if j < self.lo || j > self.hi || nz_b.binary_search(&j).is_err() {
                    continue;
                }
                any = true;
                self.witt.mul_acc(&mut acc, self.coeff(a, i), self.coeff(b, j));
            }
            if any {
                let red = self.witt.reduce(&acc);
                let base = self.index(deg, 0);
                out.coords[base..base + f].copy_from_slice(&red);
            }
        }
        out
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// F on the model: F_W on coefficients and T ↦ T^p, dropping out-of-window terms.
    pub fn frobenius(&self, a: &RingElement) -> RingElement {
        let p = self.p() as i64;
        let mut out = self.zero();
        for k in self.lo..=self.hi {
            let c = self.coeff(a, k);
            if c.iter().all(|&x| x == 0) || !self.in_window(p * k) {
                continue;
            }
            let img = self.witt.frobenius(c);
            let base = self.index(p * k, 0);
            out.coords[base..base + self.f].copy_from_slice(&img);
        }
        out
    }

    /// Units have a constant term that is a unit of W.
    pub fn is_unit(&self, a: &RingElement) -> bool {
        self.witt.is_unit(self.coeff(a, 0))
    }

    /// Inverse by Newton iteration from the inverse of the constant term.
    pub fn inverse(&self, a: &RingElement) -> Result<RingElement> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let c0 = self.witt.inverse(self.coeff(a, 0)).ok_or(Error::NotAUnit)?;
        let mut v = self.monomial(0, &c0);
        let two = self.from_int(2);
        let span = (self.hi - self.lo + 1) as u32;
        let rounds = 2 * (64 - u64::from(self.n() * span.max(1)).leading_zeros()) + 8;
        for _ in 0..rounds {
            let av = self.mul(a, &v);
            if av == self.one() {
                return Ok(v);
            }
            v = self.mul(&v, &self.sub(&two, &av));
        }
        if self.mul(a, &v) == self.one() {
            Ok(v)
        } else {
            Err(Error::NoConvergence(rounds as usize))
        }
    }

    /// Reduction of all coordinates modulo p^k.
    pub fn reduce_mod(&self, a: &RingElement, k: u32) -> RingElement {
        let m = self.r.p_pow(k.min(self.n()));
        RingElement { coords: a.coords.iter().map(|&x| if m == 0 { x } else { x % m }).collect() }
    }

    /// Minimal p-adic valuation of the coordinates (N for zero).
    pub fn valuation(&self, a: &RingElement) -> u32 {
        a.coords.iter().map(|&x| self.r.val(x)).min().unwrap_or(self.n())
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> RingElement {
        let m = self.r.modulus();
        RingElement { coords: (0..self.dim()).map(|_| rng.gen_range(0..m)).collect() }
    }

    /// Random element supported in degrees [lo/p, hi/p], so p-th powers stay in the window.
    pub fn random_small_support<R: Rng>(&self, rng: &mut R) -> RingElement {
        let p = self.p() as i64;
        let mut e = self.zero();
        let m = self.r.modulus();
        for k in -(-self.lo / p)..=self.hi / p {
            for b in 0..self.f {
                e.coords[self.index(k, b)] = rng.gen_range(0..m);
            }
        }
        e
    }

    /// Image of an element of a model with a smaller window (natural inclusion).
    pub fn embed_from(&self, src: &RingModel, a: &RingElement) -> Result<RingElement> {
        if src.f != self.f || src.p() != self.p() || src.lo < self.lo || src.hi > self.hi {
            return Err(Error::InvalidInput(format!(
                "no natural embedding {} -> {}",
                src.desc.label(),
                self.desc.label()
            )));
        }
        if src.witt.minpoly() != self.witt.minpoly() {
            return Err(Error::InvalidInput("base rings differ".into()));
        }
        let mut out = self.zero();
        for k in src.lo..=src.hi {
            for b in 0..self.f {
                out.coords[self.index(k, b)] = self.r.from_u64(a.coords[src.index(k, b)]);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
