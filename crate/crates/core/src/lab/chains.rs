//! ω_G: H₀(G, R[G]) → H₁(G, R[G_r]) and ξ_G: K₁(R[G]) → H₁(G, R[G_r]) on
//! explicit 1-chains, Ψ on H₁ ⊗ R, and the Adams transport on class sums.

use std::sync::Arc;

use serde::Serialize;

use super::{group_log_l, ClassSum, GroupRing, GroupRingElement};
use crate::error::{Error, Result};
use crate::homology::{homology, induced_psi_on_h, BarChain, CoeffModule, HomologyClass, HomologyPresentation, Scalars};
use crate::rings::RingElement;

/// H₁(G, R_N[G_r]) = H₁(G, ℤ/pᴺ[G_r]) ⊗ R_N with coordinates (factor i,
/// ring coordinate a) at index i·dim + a.
pub struct ChainLab {
    ring: Arc<GroupRing>,
    pres: HomologyPresentation,
    module: CoeffModule,
    psi: Option<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct XiLogReport {
    pub lhs: HomologyClass,
    pub rhs: HomologyClass,
    pub holds: bool,
}

impl ChainLab {
    pub fn new(ring: &Arc<GroupRing>) -> Result<Self> {
        let p = ring.p();
        let module = CoeffModule::Conjugation { p };
        let pres = homology(ring.group(), 1, module, Scalars::ModPrimePower { p, n: ring.n() })?;
        Ok(ChainLab { ring: ring.clone(), pres, module, psi: None })
    }

    pub fn presentation(&self) -> &HomologyPresentation {
        &self.pres
    }

    /// Orders of the coordinates of a class.
    pub fn orders(&self) -> Vec<u64> {
        let dim = self.ring.model().dim();
        self.pres.cyclic_orders().iter().flat_map(|&o| std::iter::repeat(o).take(dim)).collect()
    }

    fn zero_chains(&self) -> Vec<BarChain> {
        vec![BarChain::new(1, self.module); self.ring.model().dim()]
    }

    fn add_scaled(&self, chains: &mut [BarChain], g: u32, x: u32, c: &RingElement) {
        for (a, &v) in c.coords.iter().enumerate() {
            if v != 0 {
                chains[a].add_term(&[g], x, i128::from(v));
            }
        }
    }

    /// Class of a family of 1-chains, one per ring coordinate; each must be a
    /// cycle modulo pᴺ.
    pub fn class_of(&self, chains: &[BarChain]) -> Result<HomologyClass> {
        let dim = self.ring.model().dim();
        let k = self.pres.cyclic_orders().len();
        let mut coords = vec![0u64; k * dim];
        for (a, ch) in chains.iter().enumerate() {
            let cls = self.pres.class_of_cycle(ch)?;
            for i in 0..k {
                coords[i * dim + a] = cls.coords[i];
            }
        }
        Ok(HomologyClass { coords, orders: self.orders() })
    }

    /// Σ_C rep_C ⊗ s_C (rep_C)_r.
    pub fn omega_chains(&self, x: &ClassSum) -> Result<Vec<BarChain>> {
        let x = x.to_integral()?.change_ring(&self.ring)?;
        let grp = self.ring.group();
        let p = self.ring.p();
        let mut chains = self.zero_chains();
        for (k, v) in x.values().iter().enumerate() {
            let g = grp.class_rep(k);
            let (gr, _) = grp.p_parts(g, p);
            self.add_scaled(&mut chains, g, gr, v);
        }
        Ok(chains)
    }

    pub fn omega(&self, x: &ClassSum) -> Result<HomologyClass> {
        self.class_of(&self.omega_chains(x)?)
    }

    /// Σ_{g,h} g ⊗ s_g t_h (hg)_r for u = Σ s_g g, u⁻¹ = Σ t_h h.
    pub fn xi_chains(&self, u: &GroupRingElement) -> Result<Vec<BarChain>> {
        let u = u.change_ring(&self.ring)?;
        let inv = u.inverse()?;
        let grp = self.ring.group();
        let m = self.ring.model();
        let p = self.ring.p();
        let mut chains = self.zero_chains();
        for (g, s) in u.terms() {
            for (h, t) in inv.terms() {
                let (x, _) = grp.p_parts(grp.mul(h, g), p);
                self.add_scaled(&mut chains, g, x, &m.mul(s, t));
            }
        }
        Ok(chains)
    }

    pub fn xi(&self, u: &GroupRingElement) -> Result<HomologyClass> {
        self.class_of(&self.xi_chains(u)?)
    }

    fn psi_matrix(&mut self) -> Result<&Vec<Vec<u64>>> {
        if self.psi.is_none() {
            let m = self.ring.model();
            let frob: Vec<Vec<u64>> = (0..m.dim())
                .map(|b| {
                    let mut e = m.zero();
                    e.coords[b] = 1;
                    m.frobenius(&e).coords
                })
                .collect();
            self.psi = Some(induced_psi_on_h(&self.pres, &frob)?);
        }
        Ok(self.psi.as_ref().expect("just set"))
    }

    /// Ψ on H₁ ⊗ R: x ↦ xᵖ on the coefficient module, F on R.
    pub fn psi(&mut self, c: &HomologyClass) -> Result<HomologyClass> {
        let orders = self.orders();
        let mat = self.psi_matrix()?;
        let mut out = vec![0u128; orders.len()];
        for (j, &cj) in c.coords.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = (*o + u128::from(mat[j][i]) * u128::from(cj)) % u128::from(orders[i]);
            }
        }
        Ok(HomologyClass { coords: out.into_iter().map(|x| x as u64).collect(), orders })
    }

    pub fn sub(&self, a: &HomologyClass, b: &HomologyClass) -> HomologyClass {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&a.orders)
            .map(|((&x, &y), &o)| (x + o - y % o) % o)
            .collect();
        HomologyClass { coords, orders: a.orders.clone() }
    }

    pub fn add(&self, a: &HomologyClass, b: &HomologyClass) -> HomologyClass {
        let coords = a.coords.iter().zip(&b.coords).zip(&a.orders).map(|((&x, &y), &o)| (x + y) % o).collect();
        HomologyClass { coords, orders: a.orders.clone() }
    }

    /// (1 − Ψ)ξ_G(u) against ω_G(p⁻¹ℒ(u)) for a p-group G and u ∈ 1 + I_G.
    pub fn xi_log_identity(&mut self, u: &GroupRingElement) -> Result<XiLogReport> {
        let grp = self.ring.group();
        let p = self.ring.p();
        if !grp.is_p_group(p) {
            return Err(Error::Hypothesis(format!("{} is not a {p}-group", grp.label())));
        }
        let xi = self.xi(u)?;
        let psi = self.psi(&xi)?;
        let lhs = self.sub(&xi, &psi);
        let hi = self.ring.with_precision(self.ring.n() + 1)?;
        let l = group_log_l(&u.change_ring(&hi)?)?;
        let rhs = self.omega(&l.div_p()?)?;
        let holds = lhs == rhs;
        Ok(XiLogReport { lhs, rhs, holds })
    }
}

/// Σ λ_C·(class of rep_Cʰ).
pub fn adams_transport(h: i64, s: &ClassSum) -> ClassSum {
    let ring = s.ring();
    let grp = ring.group();
    let m = ring.model();
    let mut values = vec![m.zero(); s.len()];
    for (k, v) in s.values().iter().enumerate() {
        let t = grp.class_of(grp.pow(grp.class_rep(k), h));
        values[t] = m.add(&values[t], v);
    }
    ClassSum { ring: ring.clone(), values, shift: s.shift() }
}
