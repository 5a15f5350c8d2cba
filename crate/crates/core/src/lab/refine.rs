//! Factorization of x ∈ (1 + pᵏR[G]) ∩ ker Det as an ordered product of
//! commutators [gᵢ, 1 + pᵏμᵢ], refined one p-adic digit at a time.

use serde::Serialize;

use super::{phi_log, GroupRingElement};
use crate::error::{Error, Result};

/// x ≡ Π [gᵢ, 1 + pᵏμᵢ] mod p^{k+steps}, factors in group enumeration order.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub k: u32,
    pub precision: u32,
    pub factors: Vec<(u32, GroupRingElement)>,
}

#[derive(Serialize)]
struct FactorSummary {
    element: String,
    mu: String,
}

impl Refinement {
    /// The ordered product of the commutators.
    pub fn product(&self, one: &GroupRingElement) -> Result<GroupRingElement> {
        let ring = one.ring();
        let scale = ring.model().zpn().p_pow(self.k) as i64;
        let mut acc = one.clone();
        for (g, mu) in &self.factors {
            let a = one.add(&mu.scale_int(scale));
            let gi = GroupRingElement::basis(ring, *g);
            acc = acc.mul(&GroupRingElement::commutator(&gi, &a)?);
        }
        Ok(acc)
    }

    pub fn summary(&self, one: &GroupRingElement) -> serde_json::Value {
        let grp = one.ring().group();
        let rows: Vec<FactorSummary> = self
            .factors
            .iter()
            .map(|(g, mu)| FactorSummary { element: grp.name(*g).to_string(), mu: mu.to_string() })
            .collect();
        serde_json::json!({ "k": self.k, "precision": self.precision, "factors": rows })
    }
}

/// Runs `steps` refinement levels starting at n = k. Each level solves
/// z ≡ Σ (g λ_g g⁻¹ − λ_g) mod p for the digit z of the current residual,
/// then updates 1 + pᵏμ_g ← (1 + pᵏμ_g)(1 + pⁿλ_g). Det-triviality of x is
/// tested through φ(log x) = 0.
pub fn commutator_refine(x: &GroupRingElement, k: u32, steps: u32) -> Result<Refinement> {
    let ring = x.ring().clone();
    let grp = ring.group();
    let model = ring.model();
    let r = *model.zpn();
    let p = ring.p();
    if k == 0 || (p == 2 && k == 1) {
        return Err(Error::PrimePowerTooSmall { p, k });
    }
    if ring.n() < k + steps {
        return Err(Error::Precision { needed: k + steps, have: ring.n() });
    }
    let one = GroupRingElement::one(&ring);
    let xm1 = x.sub(&one);
    if xm1.valuation() < k {
        return Err(Error::Hypothesis(format!("x is not congruent to 1 mod p^{k}")));
    }
    let kernel = phi_log(x)?;
    if !kernel.is_zero() {
        return Err(Error::Hypothesis("φ(log x) ≠ 0, so x is not in the determinant kernel".into()));
    }
    let order = grp.order();
    let mut mu: Vec<GroupRingElement> = vec![GroupRingElement::zero(&ring); order];
    let pk = r.p_pow(k) as i64;
    let current = |mu: &[GroupRingElement]| -> Result<GroupRingElement> {
        let mut acc = one.clone();
        for (g, m) in mu.iter().enumerate() {
            if !m.is_zero() {
                let a = one.add(&m.scale_int(pk));
                acc = acc.mul(&GroupRingElement::commutator(&GroupRingElement::basis(&ring, g as u32), &a)?);
            }
        }
        Ok(acc)
    };
    for n in k..k + steps {
        let prod = current(&mu)?;
        let y = prod.inverse()?.mul(x);
        let z = y
            .sub(&one)
            .div_p_pow(n)
            .ok_or_else(|| Error::Verification(format!("residual is not 1 mod p^{n}")))?
            .reduce_mod(1);
        if z.is_zero() {
            continue;
        }
        let phi = z.phi();
        if phi.values().iter().any(|v| !model.is_zero(&model.reduce_mod(v, 1))) {
            let residual: Vec<String> = phi
                .values()
                .iter()
                .enumerate()
                .filter(|(_, v)| !model.is_zero(&model.reduce_mod(v, 1)))
                .map(|(c, v)| format!("{}:{:?}", grp.name(grp.class_rep(c)), v.coords))
                .collect();
            return Err(Error::Infeasible { level: n, residual: residual.join(" ") });
        }
        // h = g·rep·g⁻¹ contributes z_h·rep to λ_g
        let mut lambda: Vec<GroupRingElement> = vec![GroupRingElement::zero(&ring); order];
        for (h, c) in z.terms() {
            let rep = grp.class_rep(grp.class_of(h));
            if rep == h {
                continue;
            }
            let g = grp.conjugator(rep, h).expect("same class");
            lambda[g as usize] = lambda[g as usize].add(&GroupRingElement::from_terms(&ring, [(rep, c.clone())]));
        }
        let step = r.p_pow(n - k) as i64;
        let pn = r.p_pow(n) as i64;
        for g in 0..order {
            if lambda[g].is_zero() {
                continue;
            }
            // (1 + pᵏμ)(1 + pⁿλ) = 1 + pᵏ(μ + p^{n−k}λ + pⁿμλ)
            let upd = mu[g].add(&lambda[g].scale_int(step)).add(&mu[g].mul(&lambda[g]).scale_int(pn));
            mu[g] = upd;
        }
    }
    let precision = k + steps;
    let prod = current(&mu)?;
    if prod.sub(x).valuation() < precision {
        return Err(Error::Verification("commutator product does not reproduce x".into()));
    }
    let factors = mu.into_iter().enumerate().filter(|(_, m)| !m.is_zero()).map(|(g, m)| (g as u32, m)).collect();
    Ok(Refinement { k, precision, factors })
}
