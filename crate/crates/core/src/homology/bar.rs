//! Normalized bar complex C_k = ℤ[(G∖1)^k] ⊗ M with
//! ∂[g₁|…|g_k]⊗m = [g₂|…|g_k]⊗m + Σ(−1)^i[…|g_i g_{i+1}|…]⊗m + (−1)^k[g₁|…|g_{k−1}]⊗g_k·m.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::SmallMatrix;

pub(crate) const NONE: u32 = u32::MAX;

/// Coefficient module: trivial ℤ or the permutation module on the
/// p-regular elements G_r with the conjugation action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoeffModule {
    Trivial,
    Conjugation { p: u64 },
}

impl CoeffModule {
    /// Module basis as group elements (the identity stands for the generator of ℤ).
    pub fn basis(&self, g: &FiniteGroup) -> Vec<u32> {
        match self {
            CoeffModule::Trivial => vec![0],
            CoeffModule::Conjugation { p } => g.p_regular_elements(*p),
        }
    }

    pub fn act(&self, g: &FiniteGroup, h: u32, x: u32) -> u32 {
        match self {
            CoeffModule::Trivial => x,
            CoeffModule::Conjugation { .. } => g.conj(h, x),
        }
    }

    /// Basis split into orbits of the action.
    pub(crate) fn blocks(&self, g: &FiniteGroup) -> Vec<Vec<u32>> {
        match self {
            CoeffModule::Trivial => vec![vec![0]],
            CoeffModule::Conjugation { p } => {
                g.p_regular_classes(*p).into_iter().map(|c| g.classes()[c].clone()).collect()
            }
        }
    }

    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        match self {
            CoeffModule::Trivial => Ok(()),
            CoeffModule::Conjugation { p } => {
                if !crate::modp::is_prime(*p) {
                    return Err(Error::InvalidInput(format!("{p} is not prime")));
                }
                let _ = g;
                Ok(())
            }
        }
    }
}

/// A chain in the normalized bar complex with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarChain {
    degree: usize,
    module: CoeffModule,
    terms: BTreeMap<(Vec<u32>, u32), i128>,
}

impl BarChain {
    pub fn new(degree: usize, module: CoeffModule) -> Self {
        BarChain { degree, module, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> CoeffModule {
        self.module
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32, i128)> + '_ {
        self.terms.iter().map(|((t, x), &c)| (t.as_slice(), *x, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·[tuple]⊗x`; tuples containing the identity are zero.
    pub fn add_term(&mut self, tuple: &[u32], x: u32, c: i128) {
        assert_eq!(tuple.len(), self.degree, "tuple length must equal the degree");
        if c == 0 || tuple.contains(&0) {
            return;
        }
        let key = (tuple.to_vec(), x);
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn with_term(mut self, tuple: &[u32], x: u32, c: i128) -> Self {
        self.add_term(tuple, x, c);
        self
    }

    /// ([a|b] − [b|a])⊗x.
    pub fn commuting_pair(module: CoeffModule, a: u32, b: u32, x: u32) -> Self {
        BarChain::new(2, module).with_term(&[a, b], x, 1).with_term(&[b, a], x, -1)
    }

    pub fn add(&mut self, other: &BarChain) {
        assert_eq!((self.degree, self.module), (other.degree, other.module));
        for ((t, x), &c) in &other.terms {
            self.add_term(t, *x, c);
        }
    }

    pub fn scaled(&self, k: i128) -> BarChain {
        let mut out = BarChain::new(self.degree, self.module);
        for ((t, x), &c) in &self.terms {
            out.add_term(t, *x, c * k);
        }
        out
    }

    /// Applies a map on module basis elements, keeping bar positions.
    pub fn map_coefficients(&self, module: CoeffModule, f: impl Fn(u32) -> u32) -> BarChain {
        let mut out = BarChain::new(self.degree, module);
        for ((t, x), &c) in &self.terms {
            out.add_term(t, f(*x), c);
        }
        out
    }

    /// Reduces coefficients modulo m into (−m/2, m/2].
    pub fn reduce_mod(&self, m: i128) -> BarChain {
        let mut out = BarChain::new(self.degree, self.module);
        for ((t, x), &c) in &self.terms {
            let mut r = c.rem_euclid(m);
            if r > m / 2 {
                r -= m;
            }
            out.add_term(t, *x, r);
        }
        out
    }

    pub fn boundary(&self, g: &FiniteGroup) -> Result<BarChain> {
        if self.degree == 0 {
            return Err(Error::InvalidInput("boundary of a degree-0 chain".into()));
        }
        let k = self.degree;
        let mut out = BarChain::new(k - 1, self.module);
        let mut buf = Vec::with_capacity(k);
        for ((t, x), &c) in &self.terms {
            out.add_term(&t[1..], *x, c);
            for i in 0..k - 1 {
                buf.clear();
                buf.extend_from_slice(&t[..i]);
                buf.push(g.mul(t[i], t[i + 1]));
                buf.extend_from_slice(&t[i + 2..]);
                let s = if i % 2 == 0 { -c } else { c };
                out.add_term(&buf, *x, s);
            }
            let y = self.module.act(g, t[k - 1], *x);
            let s = if k % 2 == 0 { c } else { -c };
            out.add_term(&t[..k - 1], y, s);
        }
        Ok(out)
    }
}

/// Indexing of basis chains over a conjugation-stable set of module elements:
/// index = tuple_index · d + position, tuple digits g − 1 in base |G| − 1.
#[derive(Clone, Debug)]
pub(crate) struct Indexer {
    base: u32,
    elems: Vec<u32>,
    pos: Vec<u32>,
}

impl Indexer {
    pub fn new(g: &FiniteGroup, elems: Vec<u32>) -> Self {
        let mut pos = vec![NONE; g.order()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        Indexer { base: g.order() as u32 - 1, elems, pos }
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn position(&self, x: u32) -> Option<usize> {
        let p = self.pos[x as usize];
        (p != NONE).then_some(p as usize)
    }

    pub fn dim(&self, k: usize) -> usize {
        (self.base as usize).pow(k as u32) * self.elems.len()
    }

    pub fn encode(&self, tuple: &[u32], x: u32) -> Option<usize> {
        let mut t = 0usize;
        for &g in tuple {
            if g == 0 {
                return None;
            }
            t = t * self.base as usize + (g - 1) as usize;
        }
        let p = self.position(x)?;
        Some(t * self.elems.len() + p)
    }

    pub fn decode(&self, idx: usize, k: usize, tuple: &mut Vec<u32>) -> u32 {
        let d = self.elems.len();
        let x = self.elems[idx % d];
        let mut t = idx / d;
        tuple.clear();
        tuple.resize(k, 0);
        for i in (0..k).rev() {
            tuple[i] = (t % self.base as usize) as u32 + 1;
            t /= self.base as usize;
        }
        x
    }

    /// Sparse boundary column of basis chain `idx` in degree k, terms may repeat.
    pub fn boundary(
        &self,
        g: &FiniteGroup,
        module: CoeffModule,
        k: usize,
        idx: usize,
        tuple: &mut Vec<u32>,
        buf: &mut Vec<u32>,
        out: &mut Vec<(u32, i64)>,
    ) {
        out.clear();
        let x = self.decode(idx, k, tuple);
        let d = self.elems.len();
        let b = self.base as usize;
        let px = self.pos[x as usize] as usize;
        let enc = |t: &[u32], p: usize| -> usize {
            let mut v = 0usize;
            for &h in t {
                v = v * b + (h - 1) as usize;
            }
            v * d + p
        };
        out.push((enc(&tuple[1..], px) as u32, 1));
        for i in 0..k - 1 {
            let h = g.mul(tuple[i], tuple[i + 1]);
            if h == 0 {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(&tuple[..i]);
            buf.push(h);
            buf.extend_from_slice(&tuple[i + 2..]);
            let s = if i % 2 == 0 { -1 } else { 1 };
            out.push((enc(buf, px) as u32, s));
        }
        let y = module.act(g, tuple[k - 1], x);
        let s = if k % 2 == 0 { 1 } else { -1 };
        out.push((enc(&tuple[..k - 1], self.pos[y as usize] as usize) as u32, s));
    }
}

/// Sparse integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> SmallMatrix {
        let mut m = SmallMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                let v = *m.get(i as usize, j) + c;
                m.set(i as usize, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j].iter().filter(|e| e.0 as usize == i).map(|e| e.1).sum()
    }

    /// Whether `self · other` vanishes exactly.
    pub fn composes_to_zero(&self, other: &SparseMatrix) -> bool {
        assert_eq!(self.cols, other.rows);
        let mut acc = vec![0i64; self.rows];
        for col in &other.columns {
            let mut touched = Vec::new();
            for &(k, c) in col {
                for &(i, a) in &self.columns[k as usize] {
                    acc[i as usize] += a * c;
                    touched.push(i);
                }
            }
            if touched.iter().any(|&i| acc[i as usize] != 0) {
                return false;
            }
            for i in touched {
                acc[i as usize] = 0;
            }
        }
        true
    }
}

/// Matrix of ∂_k : C_k → C_{k−1} in the global basis (tuple index · |basis| + basis position).
pub fn bar_boundary(g: &FiniteGroup, k: usize, module: CoeffModule) -> Result<SparseMatrix> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidInput(format!("boundary degree {k} outside 1..=3")));
    }
    module.validate(g)?;
    let ix = Indexer::new(g, module.basis(g));
    let (rows, cols) = (ix.dim(k - 1), ix.dim(k));
    let mut columns = Vec::with_capacity(cols);
    let (mut t, mut b, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for c in 0..cols {
        ix.boundary(g, module, k, c, &mut t, &mut b, &mut out);
        let mut col: Vec<(u32, i64)> = Vec::with_capacity(out.len());
        for &(i, s) in &out {
            match col.iter_mut().find(|e| e.0 == i) {
                Some(e) => e.1 += s,
                None => col.push((i, s)),
            }
        }
        col.retain(|e| e.1 != 0);
        col.sort_unstable();
        columns.push(col);
    }
    Ok(SparseMatrix { rows, cols, columns })
}
