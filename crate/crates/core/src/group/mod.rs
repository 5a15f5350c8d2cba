//! Finite groups as dense multiplication tables.

mod build;
pub mod catalog;

pub use build::GroupDescriptor;

use crate::abelian::AbelianGroupPresentation;
use crate::error::{Error, Result};
use crate::linalg::{smith, Matrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeSet, HashMap};

/// Largest supported group order.
pub const MAX_ORDER: usize = 64;

/// A finite group with identity at index 0.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    label: String,
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    names: Vec<String>,
    classes: Vec<Vec<u32>>,
    class_of: Vec<u32>,
}

/// Gᵃᵇ with the projection of every element.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub presentation: AbelianGroupPresentation,
    /// Cyclic orders of the coordinates (the invariant factors).
    pub orders: Vec<u64>,
    /// Coordinates of each element's image.
    pub coords: Vec<Vec<u64>>,
}

/// A normal abelian subgroup with cyclic quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicQuotientWitness {
    pub subgroup: Vec<u32>,
    pub generator_names: Vec<String>,
    pub quotient_generator: u32,
    pub index: usize,
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, validating the axioms.
    pub fn from_table(label: &str, table: &[Vec<u32>], names: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::GroupTooLarge { order: n, limit: MAX_ORDER });
        }
        for row in table {
            if row.len() != n || row.iter().any(|&x| x as usize >= n) {
                return Err(Error::InvalidGroup("table is not a square array of element indices".into()));
            }
        }
        let t = |a: usize, b: usize| table[a][b] as usize;
        let e = (0..n)
            .find(|&e| (0..n).all(|x| t(e, x) == x && t(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t(t(a, b), c) != t(a, t(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| t(a, b) == e) {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        // relabel so that the identity is 0
        let order: Vec<usize> = std::iter::once(e).chain((0..n).filter(|&x| x != e)).collect();
        let mut pos = vec![0usize; n];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let mut flat = vec![0u32; n * n];
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                flat[i * n + j] = pos[t(a, b)] as u32;
            }
        }
        let names = match names {
            Some(v) if v.len() == n => order.iter().map(|&x| v[x].clone()).collect(),
            Some(_) => return Err(Error::InvalidGroup("names length differs from order".into())),
            None => (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("g{i}") }).collect(),
        };
        Ok(Self::from_flat(label, n, flat, names))
    }

    /// Trusted constructor: identity at 0, table already valid.
    pub(crate) fn from_flat(label: &str, n: usize, table: Vec<u32>, names: Vec<String>) -> Self {
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let mut g = FiniteGroup {
            label: label.to_string(),
            n,
            table,
            inv,
            names,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        g.compute_classes();
        g
    }

    fn compute_classes(&mut self) {
        let n = self.n;
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut members: BTreeSet<u32> = BTreeSet::new();
            for g in 0..n as u32 {
                members.insert(self.conj(g, x as u32));
            }
            for &m in &members {
                class_of[m as usize] = id;
            }
            classes.push(members.into_iter().collect());
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn order(&self) -> usize {
        self.n
    }
    pub fn name(&self, g: u32) -> &str {
        &self.names[g as usize]
    }
    /// Element with the given name.
    pub fn element(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.n as u32
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
    pub fn pow(&self, a: u32, k: i64) -> u32 {
        let o = self.elem_order(a) as i64;
        let k = k.rem_euclid(o);
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }
    pub fn elem_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
    /// g·x·g⁻¹
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }
    /// a·b·a⁻¹·b⁻¹
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }
    pub fn table_row(&self, a: u32) -> &[u32] {
        &self.table[a as usize * self.n..(a as usize + 1) * self.n]
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }
    pub fn class_of(&self, g: u32) -> usize {
        self.class_of[g as usize] as usize
    }
    /// Smallest element of a class.
    pub fn class_rep(&self, c: usize) -> u32 {
        self.classes[c][0]
    }
    pub fn are_conjugate(&self, a: u32, b: u32) -> bool {
        self.class_of[a as usize] == self.class_of[b as usize]
    }
    /// Smallest g with g·a·g⁻¹ = b.
    pub fn conjugator(&self, a: u32, b: u32) -> Option<u32> {
        self.elements().find(|&g| self.conj(g, a) == b)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.n
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        let mut m = self.n as u64;
        while m % p == 0 {
            m /= p;
        }
        m == 1
    }

    pub fn centralizer(&self, g: u32) -> Vec<u32> {
        self.elements().filter(|&h| self.mul(g, h) == self.mul(h, g)).collect()
    }

    pub fn center(&self) -> Vec<u32> {
        self.elements().filter(|&z| self.classes[self.class_of(z)].len() == 1).collect()
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generate(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn commutator_subgroup(&self) -> Vec<u32> {
        let mut comms: BTreeSet<u32> = BTreeSet::new();
        for a in self.elements() {
            for b in self.elements() {
                comms.insert(self.commutator(a, b));
            }
        }
        let gens: Vec<u32> = comms.into_iter().collect();
        self.generate(&gens)
    }

    pub fn is_normal(&self, h: &[u32]) -> bool {
        let mut mem = vec![false; self.n];
        for &x in h {
            mem[x as usize] = true;
        }
        h.iter().all(|&x| self.elements().all(|g| mem[self.conj(g, x) as usize]))
    }

    pub fn is_abelian_subset(&self, h: &[u32]) -> bool {
        h.iter().all(|&a| h.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup on `elements` (sorted, containing 0) as a group, with the embedding.
    pub fn subgroup(&self, elements: &[u32], label: &str) -> Result<(FiniteGroup, Vec<u32>)> {
        let mut pos = HashMap::new();
        for (i, &x) in elements.iter().enumerate() {
            pos.insert(x, i as u32);
        }
        if elements.first() != Some(&0) {
            return Err(Error::InvalidGroup("subgroup must list the identity first".into()));
        }
        let m = elements.len();
        let mut flat = vec![0u32; m * m];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let c = self.mul(a, b);
                flat[i * m + j] = *pos
                    .get(&c)
                    .ok_or_else(|| Error::InvalidGroup("subset is not closed".into()))?;
            }
        }
        let names = elements.iter().map(|&x| self.names[x as usize].clone()).collect();
        Ok((FiniteGroup::from_flat(label, m, flat, names), elements.to_vec()))
    }

    /// Centralizer of g as a standalone group with its embedding.
    pub fn centralizer_group(&self, g: u32) -> (FiniteGroup, Vec<u32>) {
        let c = self.centralizer(g);
        let label = format!("C_{}({})", self.label, self.name(g));
        self.subgroup(&c, &label).expect("centralizer is a subgroup")
    }

    /// (g_r, g_u): p-regular and p-power parts with g = g_r·g_u commuting.
    pub fn p_parts(&self, g: u32, p: u64) -> (u32, u32) {
        let m = self.elem_order(g);
        let mut pa = 1u64;
        while m % (pa * p) == 0 {
            pa *= p;
        }
        let mr = m / pa;
        // e ≡ 0 mod pa, e ≡ 1 mod mr
        let e = (0..m).find(|&e| e % pa == 0 && e % mr == 1 % mr).unwrap_or(0);
        let f = (0..m).find(|&f| f % pa == 1 % pa && f % mr == 0).unwrap_or(0);
        (self.pow(g, e as i64), self.pow(g, f as i64))
    }

    pub fn is_p_regular(&self, g: u32, p: u64) -> bool {
        self.elem_order(g) % p != 0
    }

    /// p-regular elements G_r, sorted.
    pub fn p_regular_elements(&self, p: u64) -> Vec<u32> {
        self.elements().filter(|&g| self.is_p_regular(g, p)).collect()
    }

    /// Indices of the p-regular conjugacy classes.
    pub fn p_regular_classes(&self, p: u64) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&c| self.is_p_regular(self.class_rep(c), p))
            .collect()
    }

    /// Gᵃᵇ by Smith normal form of the Cayley-graph relation lattice.
    pub fn abelianization(&self) -> Abelianization {
        let n = self.n;
        let gens = self.small_generating_set();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        // columns are relations, rows are elements
        let mut cols: Vec<Vec<i64>> = Vec::new();
        for g in self.elements() {
            for &h in &gens {
                let mut c = vec![0i64; n];
                c[g as usize] += 1;
                c[h as usize] += 1;
                c[self.mul(g, h) as usize] -= 1;
                cols.push(c);
            }
        }
        let mut c0 = vec![0i64; n];
        c0[0] = 1;
        cols.push(c0);
        for i in 0..n {
            rows.push(cols.iter().map(|c| BigInt::from(c[i])).collect());
        }
        let a = Matrix::from_rows(rows);
        let s = smith(&a, true);
        let u = s.u.expect("tracked");
        let mut orders = Vec::new();
        let mut which = Vec::new();
        for i in 0..n {
            let d = s.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d == BigInt::from(1) {
                continue;
            }
            assert!(!d.is_zero(), "abelianization of a finite group is finite");
            orders.push(d.to_u64().expect("small"));
            which.push(i);
        }
        let coords = self
            .elements()
            .map(|g| {
                which
                    .iter()
                    .zip(&orders)
                    .map(|(&i, &o)| {
                        let x = u.get(i, g as usize).clone();
                        let o = BigInt::from(o);
                        ((x % &o + &o) % &o).to_u64().expect("small")
                    })
                    .collect()
            })
            .collect();
        Abelianization {
            presentation: AbelianGroupPresentation::from_cyclic_orders(&orders, 0),
            orders,
            coords,
        }
    }

    /// A short generating set chosen greedily by element index.
    pub fn small_generating_set(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut h = vec![0u32];
        while h.len() < self.n {
            // the element enlarging the span most, smallest index on ties
            let mut best = (0usize, 0u32);
            for g in self.elements() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut t = gens.clone();
                t.push(g);
                let size = self.generate(&t).len();
                if size > best.0 {
                    best = (size, g);
                }
            }
            gens.push(best.1);
            h = self.generate(&gens);
        }
        gens
    }

    /// S_G = {g : c·g is conjugate to g}; c must be central.
    pub fn special_set(&self, c: u32) -> Result<Vec<u32>> {
        if self.classes[self.class_of(c)].len() != 1 {
            return Err(Error::Hypothesis(format!("{} is not central", self.name(c))));
        }
        Ok(self
            .elements()
            .filter(|&g| self.are_conjugate(self.mul(c, g), g))
            .collect())
    }

    /// Conjugacy classes contained in S_G.
    pub fn special_classes(&self, c: u32) -> Result<Vec<usize>> {
        let s = self.special_set(c)?;
        let mut cs: Vec<usize> = s.iter().map(|&g| self.class_of(g)).collect();
        cs.dedup();
        cs.sort_unstable();
        cs.dedup();
        Ok(cs)
    }

    /// Subgroups generated by at most `rank` elements; only abelian ones if asked.
    pub fn subgroups_by_rank(&self, rank: usize, abelian_only: bool) -> Vec<(Vec<u32>, usize)> {
        let mut found: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut layer: BTreeSet<Vec<u32>> = BTreeSet::new();
        layer.insert(vec![0]);
        found.insert(vec![0], 0);
        for r in 1..=rank {
            let mut next = BTreeSet::new();
            for h in &layer {
                for g in self.elements() {
                    if h.binary_search(&g).is_ok() {
                        continue;
                    }
                    if abelian_only && h.iter().any(|&x| self.mul(x, g) != self.mul(g, x)) {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.push(g);
                    let k = self.generate(&gens);
                    if !found.contains_key(&k) {
                        found.insert(k.clone(), r);
                        next.insert(k);
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<(Vec<u32>, usize)> = found.into_iter().collect();
        out.sort();
        out
    }

    /// A normal abelian A with G/A cyclic, preferring large, then cyclic, then
    /// lexicographically small A. Searches subgroups generated by ≤ 3 elements.
    pub fn cyclic_quotient_witness(&self) -> Option<CyclicQuotientWitness> {
        let mut cands = self.cyclic_quotient_witnesses();
        cands.sort_by(|a, b| {
            b.0.len().cmp(&a.0.len()).then(a.1.cmp(&b.1)).then(a.0.cmp(&b.0))
        });
        cands.into_iter().next().map(|(a, _, q)| CyclicQuotientWitness {
            generator_names: a.iter().map(|&x| self.names[x as usize].clone()).collect(),
            index: self.n / a.len(),
            subgroup: a,
            quotient_generator: q,
        })
    }

    /// All witnesses (subgroup, generator rank, quotient generator).
    pub fn cyclic_quotient_witnesses(&self) -> Vec<(Vec<u32>, usize, u32)> {
        let mut out = Vec::new();
        for (a, rank) in self.subgroups_by_rank(3, true) {
            if !self.is_normal(&a) {
                continue;
            }
            let index = self.n / a.len();
            let mut mem = vec![false; self.n];
            for &x in &a {
                mem[x as usize] = true;
            }
            let q = self.elements().find(|&g| {
                let mut x = g;
                let mut k = 1;
                while !mem[x as usize] {
                    x = self.mul(x, g);
                    k += 1;
                }
                k == index
            });
            if let Some(q) = q {
                out.push((a, rank, q));
            }
        }
        out
    }

    /// Stable content hash of the multiplication table.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for &x in &self.table {
            h.update(x.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Invariants used to tell catalog groups apart.
    pub fn signature(&self) -> GroupSignature {
        let mut order_hist = std::collections::BTreeMap::new();
        for g in self.elements() {
            *order_hist.entry(self.elem_order(g)).or_insert(0usize) += 1;
        }
        let mut class_sizes: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        class_sizes.sort_unstable();
        let mut square_hist = vec![0usize; self.n];
        for g in self.elements() {
            square_hist[self.mul(g, g) as usize] += 1;
        }
        square_hist.sort_unstable();
        GroupSignature {
            order: self.n,
            element_orders: order_hist.into_iter().collect(),
            class_sizes,
            center: self.center().len(),
            derived: self.commutator_subgroup().len(),
            abelianization: self.abelianization().presentation.invariant_factors,
            square_hist,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSignature {
    pub order: usize,
    pub element_orders: Vec<(u64, usize)>,
    pub class_sizes: Vec<usize>,
    pub center: usize,
    pub derived: usize,
    pub abelianization: Vec<u64>,
    pub square_hist: Vec<usize>,
}
