//! Generators exp(r(1−c)(g−g′)) of the kernel of SK₁(R[G]) → SK₁(R[G/⟨c⟩]),
//! the congruence (1−c)ᵖ ≡ −p(1−c) mod p(1−c)², and membership in the
//! determinant kernel of 1 + (1−c)R[G] with a Type 1 / Type 2 witness.

use std::sync::Arc;

use serde::Serialize;

use super::{exp, log_one_plus, ClassSum, GroupRing, GroupRingElement};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{solve, LocalMat};
use crate::modp::Zpn;
use crate::rings::{RingDescriptor, RingElement};

/// c must be a central commutator of order p.
fn check_central_commutator(grp: &FiniteGroup, c: u32, p: u64) -> Result<()> {
    if grp.elem_order(c) != p {
        return Err(Error::Hypothesis(format!("{} does not have order {p}", grp.name(c))));
    }
    if grp.classes()[grp.class_of(c)].len() != 1 {
        return Err(Error::Hypothesis(format!("{} is not central", grp.name(c))));
    }
    let is_commutator = grp.elements().any(|a| grp.elements().any(|b| grp.commutator(a, b) == c));
    if !is_commutator {
        return Err(Error::Hypothesis(format!("{} is not a commutator", grp.name(c))));
    }
    Ok(())
}

/// exp(r(1−c)(g−g′)) for g, g′ ∈ S_G = {g : cg conjugate to g}.
pub fn sk1_generator(ring: &Arc<GroupRing>, r: &RingElement, c: u32, g: u32, g2: u32) -> Result<GroupRingElement> {
    let grp = ring.group();
    check_central_commutator(grp, c, ring.p())?;
    let s = grp.special_set(c)?;
    for h in [g, g2] {
        if !s.contains(&h) {
            return Err(Error::Hypothesis(format!("{} is not in the special set", grp.name(h))));
        }
    }
    let one_minus_c = GroupRingElement::from_ints(ring, &[(0, 1), (c, -1)]);
    let diff = GroupRingElement::from_ints(ring, &[(g, 1), (g2, -1)]);
    let y = one_minus_c.mul(&diff).scale(r);
    let u = exp(&y)?.to_integral()?;
    if !super::phi_log(&u)?.is_zero() {
        return Err(Error::Verification("generator is not in the determinant kernel".into()));
    }
    Ok(u)
}

/// Checks (1−c)ᵖ + p(1−c) ∈ p(1−c)²ℤ[C_p] modulo pᴺ.
pub fn cyclic_congruence_check(p: u64, n: u32) -> Result<bool> {
    let grp = FiniteGroup::cyclic(p)?;
    let ring = GroupRing::new(grp, &RingDescriptor::zp(p, n))?;
    let c = 1u32;
    let x = GroupRingElement::from_ints(&ring, &[(0, 1), (c, -1)]);
    let target = x.pow(p).add(&x.scale_int(p as i64));
    let gen = x.mul(&x).scale_int(p as i64);
    let a = gen.left_multiplication_matrix();
    Ok(solve(ring.model().zpn(), &a, &target.to_vector()).is_ok())
}

/// log u = (1−c)·ξ/p^shift with ξ = Σ a_g g (Type 1, g ∈ S_G) +
/// Σ b (g − hgh⁻¹) (Type 2).
#[derive(Clone, Debug, Serialize)]
pub struct TypeWitness {
    pub shift: u32,
    pub type1: Vec<(u32, RingElement)>,
    pub type2: Vec<(u32, u32, RingElement)>,
}

impl TypeWitness {
    /// (1−c)·ξ in the group ring of precision N + shift.
    pub fn expand(&self, ring: &Arc<GroupRing>, c: u32) -> GroupRingElement {
        let grp = ring.group();
        let mut xi = GroupRingElement::zero(ring);
        for (g, a) in &self.type1 {
            xi = xi.add(&GroupRingElement::from_terms(ring, [(*g, a.clone())]));
        }
        for (g, h, b) in &self.type2 {
            let t = GroupRingElement::from_terms(ring, [(*g, b.clone()), (grp.conj(*h, *g), ring.model().neg(b))]);
            xi = xi.add(&t);
        }
        GroupRingElement::from_ints(ring, &[(0, 1), (c, -1)]).mul(&xi)
    }
}

#[derive(Clone, Debug)]
pub struct JMembership {
    pub member: bool,
    pub phi_log: ClassSum,
    pub witness: Option<TypeWitness>,
    /// Non-membership read off modulo pᴺ is only conditional on precision.
    pub precision_conditional: bool,
}

enum Column {
    Type1(u32),
    Type2(u32, u32),
}

/// Per ring coordinate, solves A·z = b over ℤ/p^M with one column per generator.
fn solve_per_coordinate(
    r: &Zpn,
    a: &LocalMat,
    rhs: &GroupRingElement,
    dim: usize,
    order: usize,
) -> std::result::Result<Vec<Vec<u64>>, (usize, Vec<u64>)> {
    let mut sols = Vec::with_capacity(dim);
    for j in 0..dim {
        let b: Vec<u64> = (0..order).map(|g| rhs.coeff(g as u32).coords[j]).collect();
        sols.push(solve(r, a, &b).map_err(|res| (j, res))?);
    }
    Ok(sols)
}

/// Membership of u ∈ 1 + (1−c)R[G] in the determinant kernel, decided by
/// φ(log u) = 0; members come with a Type 1 / Type 2 witness for log u.
pub fn j_membership(u: &GroupRingElement, c: u32) -> Result<JMembership> {
    let ring = u.ring().clone();
    let grp = ring.group();
    let p = ring.p();
    check_central_commutator(grp, c, p)?;
    let order = grp.order();
    let dim = ring.model().dim();
    let one = GroupRingElement::one(&ring);
    let one_minus_c = GroupRingElement::from_ints(&ring, &[(0, 1), (c, -1)]);
    let x = u.sub(&one);
    let ideal = one_minus_c.left_multiplication_matrix();
    if solve(ring.model().zpn(), &ideal, &x.to_vector()).is_err() {
        return Err(Error::Hypothesis("u is not in 1 + (1−c)R[G]".into()));
    }
    let log = log_one_plus(&x)?;
    let phi = log.phi();
    if !phi.is_zero() {
        return Ok(JMembership { member: false, phi_log: phi, witness: None, precision_conditional: true });
    }
    let work = log.value().ring().clone();
    let r = *work.model().zpn();
    let special = grp.special_set(c)?;
    let mut columns = Vec::new();
    let mut vectors = Vec::new();
    let cw = one_minus_c.change_ring(&work)?;
    for &g in &special {
        columns.push(Column::Type1(g));
        vectors.push(cw.mul(&GroupRingElement::from_ints(&work, &[(g, 1)])));
    }
    for h in grp.elements() {
        let rep = grp.class_rep(grp.class_of(h));
        if rep == h {
            continue;
        }
        let conj = grp.conjugator(rep, h).expect("same class");
        columns.push(Column::Type2(rep, conj));
        vectors.push(cw.mul(&GroupRingElement::from_ints(&work, &[(rep, 1), (h, -1)])));
    }
    let k0 = work.model().index(0, 0);
    let scalar_cols: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| (0..order).map(|g| v.coeff(g as u32).coords[k0]).collect())
        .collect();
    let a = LocalMat::from_cols(order, &scalar_cols);
    let sols = solve_per_coordinate(&r, &a, log.value(), dim, order).map_err(|(j, res)| Error::Infeasible {
        level: work.n(),
        residual: format!("coordinate {j}: {res:?}"),
    })?;
    let mut type1 = Vec::new();
    let mut type2 = Vec::new();
    for (idx, col) in columns.iter().enumerate() {
        let coeff = RingElement { coords: (0..dim).map(|j| sols[j][idx]).collect() };
        if work.model().is_zero(&coeff) {
            continue;
        }
        match *col {
            Column::Type1(g) => type1.push((g, coeff)),
            Column::Type2(g, h) => type2.push((g, h, coeff)),
        }
    }
    let witness = TypeWitness { shift: log.shift(), type1, type2 };
    if witness.expand(&work, c) != *log.value() {
        return Err(Error::Verification("Type 1 / Type 2 witness does not reproduce log u".into()));
    }
    Ok(JMembership { member: true, phi_log: phi, witness: Some(witness), precision_conditional: false })
}
