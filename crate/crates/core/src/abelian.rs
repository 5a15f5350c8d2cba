//! Finitely generated abelian groups and finite p-primary modules.

use crate::error::{Error, Result};
use crate::linalg::{local_snf, LocalMat, Track};
use crate::modp::Zpn;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// ℤ^free_rank ⊕ ⊕ ℤ/dᵢ with d₁ | d₂ | … and every dᵢ > 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct AbelianGroupPresentation {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl AbelianGroupPresentation {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normal form of ⊕ ℤ/oᵢ ⊕ ℤ^free; orders 0 count as free.
    pub fn from_cyclic_orders(orders: &[u64], free: usize) -> Self {
        let mut free_rank = free;
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &o in orders {
            if o == 0 {
                free_rank += 1;
                continue;
            }
            for (p, e) in factorize(o) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, mut es) in by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (k, e) in es.into_iter().enumerate() {
                factors[len - 1 - k] *= p.pow(e);
            }
        }
        AbelianGroupPresentation { invariant_factors: factors, free_rank }
    }

    pub fn from_p_exponents(p: u64, exps: &[u32]) -> Self {
        let orders: Vec<u64> = exps.iter().map(|&e| p.pow(e)).collect();
        Self::from_cyclic_orders(&orders, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u128> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().map(|&d| d as u128).product())
    }

    pub fn exponent(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.last().copied().unwrap_or(1))
    }

    /// Exponents of the p-primary part, descending.
    pub fn p_exponents(&self, p: u64) -> Vec<u32> {
        let mut es: Vec<u32> = self
            .invariant_factors
            .iter()
            .map(|&d| if d % p == 0 { crate::modp::int_val(d, p) } else { 0 })
            .filter(|&e| e > 0)
            .collect();
        es.sort_unstable_by(|a, b| b.cmp(a));
        es
    }

    pub fn p_part(&self, p: u64) -> Self {
        Self::from_p_exponents(p, &self.p_exponents(p))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut o = self.invariant_factors.clone();
        o.extend(&other.invariant_factors);
        Self::from_cyclic_orders(&o, self.free_rank + other.free_rank)
    }

    /// ⊕_{i<j} ℤ/gcd(dᵢ, dⱼ) for a finite group.
    pub fn exterior_square(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::Unsupported("exterior square of an infinite group".into()));
        }
        let d = &self.invariant_factors;
        let mut o = Vec::new();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                o.push(num_integer::gcd(d[i], d[j]));
            }
        }
        Ok(Self::from_cyclic_orders(&o, 0))
    }

    /// Tensor product of two finite groups.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !self.is_finite() || !other.is_finite() {
            return Err(Error::Unsupported("tensor with an infinite group".into()));
        }
        let mut o = Vec::new();
        for &a in &self.invariant_factors {
            for &b in &other.invariant_factors {
                o.push(num_integer::gcd(a, b));
            }
        }
        Ok(Self::from_cyclic_orders(&o, 0))
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite p-primary module ⊕ ℤ/p^{eᵢ} with coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PModule {
    pub p: u64,
    pub exps: Vec<u32>,
}

/// Quotient of a [`PModule`] with coordinate functional.
#[derive(Clone, Debug)]
pub struct PQuotient {
    pub module: PModule,
    /// Row i maps old coordinates to new coordinate i.
    pub functional: Vec<Vec<u64>>,
    /// Column i is an old-coordinate preimage of new generator i.
    pub sections: Vec<Vec<u64>>,
}

/// Summary of a homomorphism of finite p-primary modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSummary {
    pub injective: bool,
    pub surjective: bool,
    pub cokernel_exps: Vec<u32>,
    pub image_log_order: u32,
}

impl PModule {
    pub fn new(p: u64, exps: Vec<u32>) -> Self {
        PModule { p, exps }
    }

    pub fn log_order(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn presentation(&self) -> AbelianGroupPresentation {
        AbelianGroupPresentation::from_p_exponents(self.p, &self.exps)
    }

    fn work_ring(&self, extra: u32) -> Result<Zpn> {
        let e = self.exps.iter().copied().max().unwrap_or(0).max(1);
        Zpn::new(self.p, e + extra)
    }

    /// Reduces a coordinate vector modulo the cyclic orders.
    pub fn normalize(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.exps).map(|(&a, &e)| a % self.p.pow(e)).collect()
    }

    /// Quotient by the span of `gens` (old coordinates).
    pub fn quotient(&self, gens: &[Vec<u64>]) -> Result<PQuotient> {
        let r = self.work_ring(0)?;
        let k = self.exps.len();
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(k + gens.len());
        for (i, &e) in self.exps.iter().enumerate() {
            let mut c = vec![0; k];
            c[i] = r.p_pow(e);
            cols.push(c);
        }
        for g in gens {
            cols.push(g.iter().map(|&x| r.from_u64(x)).collect());
        }
        let a = LocalMat::from_cols(k, &cols);
        let s = local_snf(&r, &a, Track::ROWS);
        let u = s.u.as_ref().expect("tracked");
        let ui = s.u_inv.as_ref().expect("tracked");
        let mut exps = Vec::new();
        let mut functional = Vec::new();
        let mut sections = Vec::new();
        for i in 0..k {
            let v = s.val_at(i, r.n());
            if v == 0 {
                continue;
            }
            exps.push(v);
            functional.push(u.row(i).to_vec());
            sections.push(ui.col(i));
        }
        Ok(PQuotient { module: PModule::new(self.p, exps), functional, sections })
    }

    /// Isomorphism type of the subgroup spanned by `gens`.
    pub fn subgroup(&self, gens: &[Vec<u64>]) -> Result<PModule> {
        let k = self.exps.len();
        let m = gens.len();
        if m == 0 || k == 0 {
            return Ok(PModule::new(self.p, vec![]));
        }
        let emax = self.exps.iter().copied().max().unwrap_or(0);
        let r = Zpn::new(self.p, 2 * emax + 2)?;
        // kernel of [gens | diag(p^e)] projected to the gens coordinates
        let mut cols: Vec<Vec<u64>> = gens.iter().map(|g| g.iter().map(|&x| r.from_u64(x)).collect()).collect();
        for (i, &e) in self.exps.iter().enumerate() {
            let mut c = vec![0; k];
            c[i] = r.p_pow(e);
            cols.push(c);
        }
        let a = LocalMat::from_cols(k, &cols);
        let s = local_snf(&r, &a, Track::COLS);
        let v = s.v.as_ref().expect("tracked");
        let kernel: Vec<Vec<u64>> = (0..m + k)
            .filter(|&j| s.val_at(j, r.n()) >= r.n())
            .map(|j| (0..m).map(|i| v.get(i, j)).collect())
            .collect();
        let km = LocalMat::from_cols(m, &kernel);
        let t = local_snf(&r, &km, Track::NONE);
        let exps = (0..m).map(|i| t.val_at(i, r.n())).filter(|&e| e > 0).collect::<Vec<_>>();
        if exps.iter().any(|&e| e > emax) {
            return Err(Error::Verification("subgroup computation lost precision".into()));
        }
        Ok(PModule::new(self.p, exps))
    }

    /// Summary of the map sending generator i to `images[i]` in `target`.
    pub fn hom_summary(&self, target: &PModule, images: &[Vec<u64>]) -> Result<HomSummary> {
        assert_eq!(images.len(), self.exps.len());
        for (img, &e) in images.iter().zip(&self.exps) {
            let ok = img.iter().zip(&target.exps).all(|(&y, &te)| {
                e >= te || (y % self.p.pow(te)) % self.p.pow(te - e) == 0
            });
            if !ok {
                return Err(Error::InvalidInput("homomorphism not well defined on a cyclic factor".into()));
            }
        }
        let q = target.quotient(images)?;
        let coker = q.module.log_order();
        let image_log_order = target.log_order() - coker;
        Ok(HomSummary {
            injective: image_log_order == self.log_order(),
            surjective: coker == 0,
            cokernel_exps: q.module.exps,
            image_log_order,
        })
    }
}
