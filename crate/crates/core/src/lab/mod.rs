//! Truncated p-adic group rings R_N[G]: arithmetic, φ, Ψ, the logarithm
//! and exponential series, the group logarithm ℒ, commutator factorization,
//! kernel generators and the chain-level maps ω_G and ξ_G.

mod chains;
mod checks;
mod kernel;
mod refine;
mod series;

pub use chains::{adams_transport, ChainLab, XiLogReport};
pub use checks::{run_lab_checks, LabReport, LabSuite};
pub use kernel::{j_membership, cyclic_congruence_check, sk1_generator, JMembership, TypeWitness};
pub use refine::{commutator_refine, Refinement};
pub use series::{exp, group_log_l, log_one_plus, phi_log};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{solve, LocalMat};
use crate::rings::{RingDescriptor, RingElement, RingModel};

/// R_N[G] for a finite group G and a ring model R_N.
#[derive(Debug)]
pub struct GroupRing {
    group: FiniteGroup,
    model: RingModel,
}

impl GroupRing {
    pub fn new(group: FiniteGroup, ring: &RingDescriptor) -> Result<Arc<Self>> {
        let model = RingModel::new(ring)?;
        Ok(Arc::new(GroupRing { group, model }))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn model(&self) -> &RingModel {
        &self.model
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        self.model.descriptor()
    }

    pub fn p(&self) -> u64 {
        self.model.p()
    }

    pub fn n(&self) -> u32 {
        self.model.n()
    }

    /// The same group ring at another precision.
    pub fn with_precision(&self, n: u32) -> Result<Arc<Self>> {
        if n == self.n() {
            return Ok(Arc::new(GroupRing { group: self.group.clone(), model: self.model.clone() }));
        }
        let desc = self.descriptor().with_precision(n);
        let model = RingModel::new(&desc).map_err(|_| {
            Error::Budget(format!("precision {} is not representable for p = {}", n, self.p()))
        })?;
        Ok(Arc::new(GroupRing { group: self.group.clone(), model }))
    }

    fn same_shape(&self, other: &GroupRing) -> bool {
        let (a, b) = (self.descriptor(), other.descriptor());
        a.kind == b.kind
            && a.p == b.p
            && a.f == b.f
            && a.d == b.d
            && self.group.order() == other.group.order()
            && self.group.label() == other.group.label()
    }
}

/// An element Σ r_g g with no explicit zero coefficients.
#[derive(Clone, Debug)]
pub struct GroupRingElement {
    ring: Arc<GroupRing>,
    coeffs: BTreeMap<u32, RingElement>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.n() == other.ring.n() && self.ring.same_shape(&other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for GroupRingElement {}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let r = self.ring.model.zpn();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&g, c)| {
                let cs: Vec<String> = c.coords.iter().map(|&x| r.signed(x).to_string()).collect();
                let c = if cs.len() == 1 { cs[0].clone() } else { format!("({})", cs.join(",")) };
                format!("{}·{}", c, self.ring.group.name(g))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl GroupRingElement {
    pub fn zero(ring: &Arc<GroupRing>) -> Self {
        GroupRingElement { ring: ring.clone(), coeffs: BTreeMap::new() }
    }

    pub fn scalar(ring: &Arc<GroupRing>, r: RingElement) -> Self {
        Self::from_terms(ring, [(0, r)])
    }

    pub fn one(ring: &Arc<GroupRing>) -> Self {
        Self::scalar(ring, ring.model.one())
    }

    pub fn from_int(ring: &Arc<GroupRing>, c: i64) -> Self {
        Self::scalar(ring, ring.model.from_int(c))
    }

    /// The basis element g.
    pub fn basis(ring: &Arc<GroupRing>, g: u32) -> Self {
        Self::from_terms(ring, [(g, ring.model.one())])
    }

    /// Σ c·g from integer coefficients.
    pub fn from_ints(ring: &Arc<GroupRing>, terms: &[(u32, i64)]) -> Self {
        Self::from_terms(ring, terms.iter().map(|&(g, c)| (g, ring.model.from_int(c))))
    }

    /// Sums repeated group elements.
    pub fn from_terms(ring: &Arc<GroupRing>, terms: impl IntoIterator<Item = (u32, RingElement)>) -> Self {
        let m = &ring.model;
        let mut coeffs: BTreeMap<u32, RingElement> = BTreeMap::new();
        for (g, r) in terms {
            assert!((g as usize) < ring.group.order(), "group element out of range");
            match coeffs.get_mut(&g) {
                Some(c) => *c = m.add(c, &r),
                None => {
                    coeffs.insert(g, r);
                }
            }
        }
        coeffs.retain(|_, c| !m.is_zero(c));
        GroupRingElement { ring: ring.clone(), coeffs }
    }

    pub fn random<R: Rng>(ring: &Arc<GroupRing>, rng: &mut R) -> Self {
        let m = &ring.model;
        Self::from_terms(ring, ring.group.elements().map(|g| (g, m.random(rng))))
    }

    /// Random element of the augmentation ideal.
    pub fn random_augmentation_zero<R: Rng>(ring: &Arc<GroupRing>, rng: &mut R) -> Self {
        let x = Self::random(ring, rng);
        let e = x.augmentation();
        x.sub(&Self::scalar(ring, e))
    }

    pub fn ring(&self) -> &Arc<GroupRing> {
        &self.ring
    }

    pub fn coeff(&self, g: u32) -> RingElement {
        self.coeffs.get(&g).cloned().unwrap_or_else(|| self.ring.model.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &RingElement)> + '_ {
        self.coeffs.iter().map(|(&g, c)| (g, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ring)
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            self.ring.n() == other.ring.n() && self.ring.same_shape(&other.ring),
            "operands live in different group rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let terms = self.coeffs.iter().chain(other.coeffs.iter()).map(|(&g, c)| (g, c.clone()));
        Self::from_terms(&self.ring, terms)
    }

    pub fn neg(&self) -> Self {
        let m = &self.ring.model;
        Self::from_terms(&self.ring, self.coeffs.iter().map(|(&g, c)| (g, m.neg(c))))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let g = &self.ring.group;
        let m = &self.ring.model;
        if m.dim() == 1 {
            let r = m.zpn();
            let mut acc = vec![0u64; g.order()];
            for (&a, x) in &self.coeffs {
                let row = g.table_row(a);
                for (&b, y) in &other.coeffs {
                    let ab = row[b as usize] as usize;
                    acc[ab] = r.mul_add(acc[ab], x.coords[0], y.coords[0]);
                }
            }
            let terms = acc.into_iter().enumerate().map(|(h, c)| (h as u32, RingElement { coords: vec![c] }));
            return Self::from_terms(&self.ring, terms);
        }
        let mut acc: Vec<Option<RingElement>> = vec![None; g.order()];
        for (&a, x) in &self.coeffs {
            let row = g.table_row(a);
            for (&b, y) in &other.coeffs {
                let ab = row[b as usize] as usize;
                let prod = m.mul(x, y);
                acc[ab] = Some(match acc[ab].take() {
                    None => prod,
                    Some(s) => m.add(&s, &prod),
                });
            }
        }
        let terms = acc.into_iter().enumerate().filter_map(|(h, c)| c.map(|c| (h as u32, c)));
        Self::from_terms(&self.ring, terms)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// r·x for a ring scalar r.
    pub fn scale(&self, r: &RingElement) -> Self {
        let m = &self.ring.model;
        Self::from_terms(&self.ring, self.coeffs.iter().map(|(&g, c)| (g, m.mul(c, r))))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let m = &self.ring.model;
        let k = m.zpn().from_i64(k);
        Self::from_terms(&self.ring, self.coeffs.iter().map(|(&g, c)| (g, m.scale(c, k))))
    }

    fn map_coords(&self, f: impl Fn(u64) -> u64) -> Self {
        let terms = self.coeffs.iter().map(|(&g, c)| (g, RingElement { coords: c.coords.iter().map(|&x| f(x)).collect() }));
        Self::from_terms(&self.ring, terms)
    }

    /// Exact division by pᵏ, None when some coordinate is not divisible.
    /// The quotient is only known modulo p^{N−k}.
    pub fn div_p_pow(&self, k: u32) -> Option<Self> {
        let r = *self.ring.model.zpn();
        let d = r.p().checked_pow(k)?;
        if self.coeffs.values().any(|c| c.coords.iter().any(|&x| x % d != 0)) {
            return None;
        }
        Some(self.map_coords(|x| x / d))
    }

    /// Reduction of every coordinate modulo pᵏ.
    pub fn reduce_mod(&self, k: u32) -> Self {
        let m = &self.ring.model;
        Self::from_terms(&self.ring, self.coeffs.iter().map(|(&g, c)| (g, m.reduce_mod(c, k))))
    }

    /// Minimal valuation of the coordinates, N for zero.
    pub fn valuation(&self) -> u32 {
        let m = &self.ring.model;
        self.coeffs.values().map(|c| m.valuation(c)).min().unwrap_or(m.n())
    }

    /// The same element in a group ring of another precision, by canonical
    /// lift or by reduction.
    pub fn change_ring(&self, target: &Arc<GroupRing>) -> Result<Self> {
        if !self.ring.same_shape(target) {
            return Err(Error::InvalidInput("group rings differ beyond precision".into()));
        }
        let q = target.model.zpn().modulus();
        let terms = self.coeffs.iter().map(|(&g, c)| (g, RingElement { coords: c.coords.iter().map(|&x| x % q).collect() }));
        Ok(Self::from_terms(target, terms))
    }

    /// ε(x) = Σ r_g.
    pub fn augmentation(&self) -> RingElement {
        let m = &self.ring.model;
        self.coeffs.values().fold(m.zero(), |acc, c| m.add(&acc, c))
    }

    /// g·x·g⁻¹.
    pub fn conjugate(&self, g: u32) -> Self {
        let grp = &self.ring.group;
        Self::from_terms(&self.ring, self.coeffs.iter().map(|(&h, c)| (grp.conj(g, h), c.clone())))
    }

    /// Ψ(Σ r_g g) = Σ F(r_g) gᵖ.
    pub fn psi(&self) -> Self {
        let grp = &self.ring.group;
        let m = &self.ring.model;
        let p = self.ring.p() as i64;
        Self::from_terms(&self.ring, self.coeffs.iter().map(|(&g, c)| (grp.pow(g, p), m.frobenius(c))))
    }

    /// φ: class-wise coefficient sums.
    pub fn phi(&self) -> ClassSum {
        let grp = &self.ring.group;
        let m = &self.ring.model;
        let mut values = vec![m.zero(); grp.classes().len()];
        for (&g, c) in &self.coeffs {
            let k = grp.class_of(g);
            values[k] = m.add(&values[k], c);
        }
        ClassSum { ring: self.ring.clone(), values, shift: 0 }
    }

    /// Smallest m with xᵐ ≡ 0 mod p, up to `cap`.
    pub fn nilpotency_mod_p(&self, cap: u64) -> Option<u64> {
        let mut y = self.clone();
        for m in 1..=cap {
            if y.valuation() >= 1 {
                return Some(m);
            }
            y = y.mul(self);
        }
        None
    }

    fn radical_cap(&self) -> u64 {
        4 * self.ring.group.order() as u64 + self.ring.model.dim() as u64 + 4
    }

    /// (1+x)⁻¹ = Σ (−x)ᵏ for x nilpotent mod p, by the doubling product
    /// Π (1 + (−x)^{2ʲ}).
    pub fn invert_one_plus_radical(x: &Self) -> Result<Self> {
        let ring = &x.ring;
        let one = Self::one(ring);
        if x.is_zero() {
            return Ok(one);
        }
        let m = x.nilpotency_mod_p(x.radical_cap()).ok_or_else(|| {
            Error::Hypothesis("1 + x with x not nilpotent mod p is outside the radical criterion".into())
        })?;
        let terms_needed = m * u64::from(ring.n());
        let mut acc = one.clone();
        let mut t = x.neg();
        let mut covered = 1u64;
        while covered < terms_needed {
            acc = acc.mul(&one.add(&t));
            t = t.mul(&t);
            covered *= 2;
        }
        let u = one.add(x);
        if !u.mul(&acc).is_one() || !acc.mul(&u).is_one() {
            return Err(Error::NoConvergence(covered as usize));
        }
        Ok(acc)
    }

    /// Two-sided inverse; geometric series when u − 1 is nilpotent mod p,
    /// a linear solve otherwise.
    pub fn inverse(&self) -> Result<Self> {
        let one = Self::one(&self.ring);
        let x = self.sub(&one);
        if x.nilpotency_mod_p(x.radical_cap()).is_some() {
            return Self::invert_one_plus_radical(&x);
        }
        let cols = self.left_multiplication_matrix();
        let rhs = one.to_vector();
        let r = self.ring.model.zpn();
        let v = solve(r, &cols, &rhs).map_err(|_| Error::NotAUnit)?;
        let inv = Self::from_vector(&self.ring, &v);
        if !self.mul(&inv).is_one() || !inv.mul(self).is_one() {
            return Err(Error::NotAUnit);
        }
        Ok(inv)
    }

    /// [a, b] = a·b·a⁻¹·b⁻¹.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        Ok(a.mul(b).mul(&a.inverse()?).mul(&b.inverse()?))
    }

    /// Coordinates in the basis g·e_j, index g·dim + j.
    pub fn to_vector(&self) -> Vec<u64> {
        let dim = self.ring.model.dim();
        let mut v = vec![0u64; self.ring.group.order() * dim];
        for (&g, c) in &self.coeffs {
            v[g as usize * dim..(g as usize + 1) * dim].copy_from_slice(&c.coords);
        }
        v
    }

    pub fn from_vector(ring: &Arc<GroupRing>, v: &[u64]) -> Self {
        let dim = ring.model.dim();
        let terms = (0..ring.group.order()).map(|g| (g as u32, RingElement { coords: v[g * dim..(g + 1) * dim].to_vec() }));
        Self::from_terms(ring, terms)
    }

    /// Matrix of y ↦ self·y over ℤ/pᴺ in the coordinates of `to_vector`.
    pub fn left_multiplication_matrix(&self) -> LocalMat {
        let ring = &self.ring;
        let dim = ring.model.dim();
        let n = ring.group.order() * dim;
        let mut cols = Vec::with_capacity(n);
        for h in ring.group.elements() {
            for j in 0..dim {
                let mut e = ring.model.zero();
                e.coords[j] = 1;
                cols.push(self.mul(&Self::from_terms(ring, [(h, e)])).to_vector());
            }
        }
        LocalMat::from_cols(n, &cols)
    }
}

/// pᵛ·unit with unit primitive (not divisible by p), or zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicScalar {
    /// None for zero.
    pub valuation: Option<i64>,
    /// Coordinates of the unit part, known modulo p^precision.
    pub unit: Vec<u64>,
    pub precision: u32,
}

impl PAdicScalar {
    /// Normalizes value/p^shift where value is known modulo p^n.
    pub fn from_scaled(model: &RingModel, value: &RingElement, shift: u32) -> Self {
        let n = model.n();
        if model.is_zero(value) {
            return PAdicScalar { valuation: None, unit: vec![0; value.coords.len()], precision: n.saturating_sub(shift) };
        }
        let v = model.valuation(value);
        let d = model.p().pow(v);
        PAdicScalar {
            valuation: Some(i64::from(v) - i64::from(shift)),
            unit: value.coords.iter().map(|&x| x / d).collect(),
            precision: n - v,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }
}

/// An element of R[C_G] (or of p^{−shift}R[C_G]): one value per class.
#[derive(Clone, Debug)]
pub struct ClassSum {
    ring: Arc<GroupRing>,
    values: Vec<RingElement>,
    shift: u32,
}

impl PartialEq for ClassSum {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift && self.ring.n() == other.ring.n() && self.values == other.values
    }
}

impl ClassSum {
    pub fn zero(ring: &Arc<GroupRing>) -> Self {
        let values = vec![ring.model.zero(); ring.group.classes().len()];
        ClassSum { ring: ring.clone(), values, shift: 0 }
    }

    pub fn from_values(ring: &Arc<GroupRing>, values: Vec<RingElement>) -> Result<Self> {
        if values.len() != ring.group.classes().len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} classes",
                values.len(),
                ring.group.classes().len()
            )));
        }
        Ok(ClassSum { ring: ring.clone(), values, shift: 0 })
    }

    /// r·(class k).
    pub fn of_class(ring: &Arc<GroupRing>, k: usize, r: RingElement) -> Self {
        let mut s = Self::zero(ring);
        s.values[k] = r;
        s
    }

    pub fn ring(&self) -> &Arc<GroupRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Stored numerators; the represented values are these divided by p^shift.
    pub fn values(&self) -> &[RingElement] {
        &self.values
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Number of p-adic digits the represented values are known to.
    pub fn precision(&self) -> u32 {
        self.ring.n() - self.shift
    }

    pub fn coefficient(&self, k: usize) -> PAdicScalar {
        PAdicScalar::from_scaled(&self.ring.model, &self.values[k], self.shift)
    }

    /// Minimal valuation over all classes, None for zero.
    pub fn min_valuation(&self) -> Option<i64> {
        (0..self.len()).filter_map(|k| self.coefficient(k).valuation).min()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| self.ring.model.is_zero(v))
    }

    fn check(&self, other: &Self) {
        assert!(
            self.shift == other.shift && self.ring.n() == other.ring.n() && self.len() == other.len(),
            "class sums at different scales"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let m = &self.ring.model;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| m.add(a, b)).collect();
        ClassSum { ring: self.ring.clone(), values, shift: self.shift }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let m = &self.ring.model;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| m.sub(a, b)).collect();
        ClassSum { ring: self.ring.clone(), values, shift: self.shift }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let m = &self.ring.model;
        let k = m.zpn().from_i64(k);
        let values = self.values.iter().map(|a| m.scale(a, k)).collect();
        ClassSum { ring: self.ring.clone(), values, shift: self.shift }
    }

    /// Ψ̄: class of g ↦ class of gᵖ, F on the coefficient.
    pub fn psi_bar(&self) -> Self {
        let grp = &self.ring.group;
        let m = &self.ring.model;
        let p = self.ring.p() as i64;
        let mut values = vec![m.zero(); self.len()];
        for (k, v) in self.values.iter().enumerate() {
            let t = grp.class_of(grp.pow(grp.class_rep(k), p));
            values[t] = m.add(&values[t], &m.frobenius(v));
        }
        ClassSum { ring: self.ring.clone(), values, shift: self.shift }
    }

    /// The sum of all values (the augmentation of any preimage).
    pub fn total(&self) -> PAdicScalar {
        let m = &self.ring.model;
        let t = self.values.iter().fold(m.zero(), |acc, v| m.add(&acc, v));
        PAdicScalar::from_scaled(m, &t, self.shift)
    }

    /// Values with nonnegative valuation as a shift-0 class sum at
    /// precision N − shift.
    pub fn to_integral(&self) -> Result<ClassSum> {
        if self.shift == 0 {
            return Ok(self.clone());
        }
        let m = &self.ring.model;
        let d = m.p().pow(self.shift);
        for (k, v) in self.values.iter().enumerate() {
            if v.coords.iter().any(|&x| x % d != 0) {
                let val = i64::from(m.valuation(v)) - i64::from(self.shift);
                return Err(Error::Integrality { class: k, valuation: val });
            }
        }
        let ring = self.ring.with_precision(self.precision())?;
        let values = self.values.iter().map(|v| RingElement { coords: v.coords.iter().map(|&x| x / d).collect() }).collect();
        Ok(ClassSum { ring, values, shift: 0 })
    }

    /// Exact division by p of an integral class sum, one digit of precision lost.
    pub fn div_p(&self) -> Result<ClassSum> {
        let m = &self.ring.model;
        let p = m.p();
        for (k, v) in self.values.iter().enumerate() {
            if v.coords.iter().any(|&x| x % p != 0) {
                let val = i64::from(m.valuation(v)) - i64::from(self.shift);
                return Err(Error::Integrality { class: k, valuation: val });
            }
        }
        if self.ring.n() <= 1 {
            return Err(Error::Precision { needed: 2, have: self.ring.n() });
        }
        let ring = self.ring.with_precision(self.ring.n() - 1)?;
        let values = self.values.iter().map(|v| RingElement { coords: v.coords.iter().map(|&x| x / p).collect() }).collect();
        Ok(ClassSum { ring, values, shift: self.shift })
    }

    /// Reduction or canonical lift to another precision (shift 0 only).
    pub fn change_ring(&self, target: &Arc<GroupRing>) -> Result<ClassSum> {
        if self.shift != 0 || !self.ring.same_shape(target) {
            return Err(Error::InvalidInput("class sum cannot be moved to that ring".into()));
        }
        let q = target.model.zpn().modulus();
        let values = self.values.iter().map(|v| RingElement { coords: v.coords.iter().map(|&x| x % q).collect() }).collect();
        Ok(ClassSum { ring: target.clone(), values, shift: 0 })
    }
}

/// value / p^shift with value in R_{N+shift}[G]: an element of p^{−shift}R[G]
/// known modulo pᴺ.
#[derive(Clone, Debug)]
pub struct ScaledElement {
    value: GroupRingElement,
    shift: u32,
}

impl ScaledElement {
    pub fn value(&self) -> &GroupRingElement {
        &self.value
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn precision(&self) -> u32 {
        self.value.ring.n() - self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn coefficient(&self, g: u32) -> PAdicScalar {
        PAdicScalar::from_scaled(&self.value.ring.model, &self.value.coeff(g), self.shift)
    }

    pub fn min_valuation(&self) -> Option<i64> {
        if self.value.is_zero() {
            None
        } else {
            Some(i64::from(self.value.valuation()) - i64::from(self.shift))
        }
    }

    /// φ of the represented element.
    pub fn phi(&self) -> ClassSum {
        let mut c = self.value.phi();
        c.shift = self.shift;
        c
    }

    /// The represented element in R_N[G], when it is integral.
    pub fn to_integral(&self) -> Result<GroupRingElement> {
        let ring = self.value.ring.with_precision(self.precision())?;
        match self.value.div_p_pow(self.shift) {
            Some(v) => v.change_ring(&ring),
            None => {
                let (g, c) = self
                    .value
                    .terms()
                    .min_by_key(|(_, c)| self.value.ring.model.valuation(c))
                    .expect("nonzero");
                let val = i64::from(self.value.ring.model.valuation(c)) - i64::from(self.shift);
                Err(Error::Integrality { class: self.value.ring.group.class_of(g), valuation: val })
            }
        }
    }
}

#[cfg(test)]
mod tests;
