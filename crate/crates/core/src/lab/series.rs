//! log(1+x) and exp(y) as truncated series with a bounded negative-valuation
//! budget, the group logarithm ℒ and the kernel test φ∘log.

use std::sync::Arc;

use super::{ClassSum, GroupRing, GroupRingElement, ScaledElement};
use crate::error::{Error, Result};
use crate::modp::int_val;
use crate::rings::{scalar_log_l, RingElement};

/// Lower bounds v(xᵏ) ≥ (k div m)·a + low[k mod m] from measured valuations.
struct Growth {
    m: u64,
    a: u32,
    low: Vec<u32>,
}

impl Growth {
    /// Valuations are read on the canonical lift at a higher precision, so a
    /// value below that precision is exact.
    fn measure(x: &GroupRingElement, cap: u64, accept: impl Fn(u64, u32) -> bool) -> Option<Growth> {
        let n = x.ring().n();
        let x = [2 * n + 4, n + 8, n + 2]
            .into_iter()
            .find_map(|m| x.ring().with_precision(m).ok().and_then(|r| x.change_ring(&r).ok()))
            .unwrap_or_else(|| x.clone());
        let mut low = vec![0u32];
        let mut y = x.clone();
        for m in 1..=cap {
            let v = y.valuation();
            if accept(m, v) {
                return Some(Growth { m, a: v, low });
            }
            low.push(v);
            y = y.mul(&x);
        }
        None
    }

    fn bound(&self, k: u64) -> i64 {
        (k / self.m) as i64 * i64::from(self.a) + i64::from(self.low[(k % self.m) as usize])
    }
}

fn cap_for(x: &GroupRingElement) -> u64 {
    4 * x.ring().group().order() as u64 + x.ring().model().dim() as u64 + 4
}

/// First K such that every term k ≥ K has valuation at least `target`, given
/// a per-term lower bound and a monotone linear minorant for large k.
fn truncation(target: i64, exact: impl Fn(u64) -> i64, linear: impl Fn(u64) -> f64, start: u64) -> u64 {
    let mut k0 = start.max(1);
    while linear(k0) < target as f64 {
        k0 += 1;
    }
    (1..k0).rev().find(|&k| exact(k) < target).map_or(1, |k| k + 1)
}

fn working_ring(x: &GroupRingElement, n: u32) -> Result<Arc<GroupRing>> {
    x.ring().with_precision(n)
}

/// log(1+x) = Σ (−1)^{k+1} xᵏ/k for x nilpotent mod p. The series is cut at
/// K with (K div m)·a − log_p K ≥ N where xᵐ ∈ pᵃR[G].
pub fn log_one_plus(x: &GroupRingElement) -> Result<ScaledElement> {
    let ring = x.ring().clone();
    let (p, n) = (ring.p(), ring.n());
    if x.is_zero() {
        return Ok(ScaledElement { value: x.clone(), shift: 0 });
    }
    let gr = Growth::measure(x, cap_for(x), |_, v| v >= 1)
        .ok_or_else(|| Error::Budget("log(1+x) needs x nilpotent mod p".into()))?;
    let lp = (p as f64).ln();
    let term = |k: u64| gr.bound(k) - i64::from(int_val(k, p));
    let (m, a) = (gr.m as f64, f64::from(gr.a));
    let linear = |k: u64| a * (k as f64 - m + 1.0) / m - (k as f64).ln() / lp;
    let start = (m / (a * lp)).ceil() as u64 + 1;
    let big_k = truncation(i64::from(n), term, linear, start);
    let mut budget = 0u32;
    let mut digits = 0u32;
    for k in 1..big_k {
        budget = budget.max((-term(k)).max(0) as u32);
        digits = digits.max(int_val(k, p));
    }
    let work = working_ring(x, n + digits)?;
    let out = working_ring(x, n + budget)?;
    let r = *work.model().zpn();
    let xw = x.change_ring(&work)?;
    let mut acc = GroupRingElement::zero(&out);
    let mut xk = xw.clone();
    for k in 1..big_k {
        let v = int_val(k, p);
        let unit = r.inv(r.from_u64(k / p.pow(v))).expect("prime-to-p part");
        let t = if v <= budget {
            xk.scale_int(r.p_pow(budget - v) as i64)
        } else {
            xk.div_p_pow(v - budget)
                .ok_or_else(|| Error::Verification("log term below its valuation bound".into()))?
        };
        let mut t = t.scale(&work.model().monomial(0, &[unit])).change_ring(&out)?;
        if k % 2 == 0 {
            t = t.neg();
        }
        acc = acc.add(&t);
        xk = xk.mul(&xw);
    }
    Ok(ScaledElement { value: acc, shift: budget })
}

/// exp(y) = Σ yᵏ/k! for y with v(yᵐ) > m/(p−1) for some m.
pub fn exp(y: &GroupRingElement) -> Result<ScaledElement> {
    let ring = y.ring().clone();
    let (p, n) = (ring.p(), ring.n());
    if y.is_zero() {
        return Ok(ScaledElement { value: GroupRingElement::one(&ring), shift: 0 });
    }
    let gr = Growth::measure(y, cap_for(y), |m, v| u64::from(v) * (p - 1) > m)
        .ok_or_else(|| Error::Budget("exp(y) needs v(yᵐ) > m/(p−1) for some m".into()))?;
    let fact_val = |k: u64| -> u32 { (1..=k).map(|j| int_val(j, p)).sum() };
    let term = |k: u64| gr.bound(k) - i64::from(fact_val(k));
    let (m, a, pm1) = (gr.m as f64, f64::from(gr.a), (p - 1) as f64);
    let linear = |k: u64| a * (k as f64 - m + 1.0) / m - (k as f64 - 1.0) / pm1;
    let big_k = truncation(i64::from(n), term, linear, 1);
    let mut budget = 0u32;
    for k in 1..big_k {
        budget = budget.max((-term(k)).max(0) as u32);
    }
    let digits = fact_val(big_k.saturating_sub(1));
    let work = working_ring(y, n + digits)?;
    let out = working_ring(y, n + budget)?;
    let r = *work.model().zpn();
    let yw = y.change_ring(&work)?;
    let mut acc = GroupRingElement::one(&work).scale_int(r.p_pow(budget) as i64).change_ring(&out)?;
    let mut yk = yw.clone();
    let mut unit = 1u64;
    let mut v = 0u32;
    for k in 1..big_k {
        let vk = int_val(k, p);
        v += vk;
        unit = r.mul(unit, r.from_u64(k / p.pow(vk)));
        let inv = r.inv(unit).expect("prime-to-p part");
        let t = if v <= budget {
            yk.scale_int(r.p_pow(budget - v) as i64)
        } else {
            yk.div_p_pow(v - budget)
                .ok_or_else(|| Error::Verification("exp term below its valuation bound".into()))?
        };
        let t = t.scale(&work.model().monomial(0, &[inv])).change_ring(&out)?;
        acc = acc.add(&t);
        yk = yk.mul(&yw);
    }
    Ok(ScaledElement { value: acc, shift: budget })
}

/// φ(log u) for u = 1 + x with x nilpotent mod p. Zero exactly on the
/// determinant kernel, which is how the lab tests Det-triviality.
pub fn phi_log(u: &GroupRingElement) -> Result<ClassSum> {
    let x = u.sub(&GroupRingElement::one(u.ring()));
    Ok(log_one_plus(&x)?.phi())
}

/// ℒ(u) = φ((p − Ψ) log u) for u ∈ 1 + I_G; a unit augmentation ε(u) is split
/// off as ℒ_R(ε(u)) at the identity class. Every value lies in pR.
pub fn group_log_l(u: &GroupRingElement) -> Result<ClassSum> {
    let ring = u.ring().clone();
    let model = ring.model();
    let eps = u.augmentation();
    if !model.is_unit(&eps) {
        return Err(Error::NotAUnit);
    }
    let one = GroupRingElement::one(&ring);
    let (scalar, u1) = if eps == model.one() {
        (model.zero(), u.clone())
    } else {
        let inv = model.inverse(&eps)?;
        (scalar_log_l(model, &eps)?, u.scale(&inv))
    };
    let log = log_one_plus(&u1.sub(&one))?;
    let e = log.shift;
    let s = log.value();
    let t = s.scale_int(ring.p() as i64).sub(&s.psi());
    let c = t.phi();
    let wm = c.ring().model();
    let d = ring.p().pow(e);
    let mut values = Vec::with_capacity(c.len());
    for (k, v) in c.values().iter().enumerate() {
        let val = wm.valuation(v);
        if val < e + 1 {
            return Err(Error::Integrality { class: k, valuation: i64::from(val) - i64::from(e) });
        }
        values.push(RingElement { coords: v.coords.iter().map(|&x| x / d).collect() });
    }
    let mut out = ClassSum::from_values(&ring, values)?;
    if !model.is_zero(&scalar) {
        out = out.add(&ClassSum::of_class(&ring, ring.group().class_of(0), scalar));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_meets_the_valuation_inequality() {
        for (m, p, n) in [(1u64, 2u64, 5u32), (4, 2, 5), (3, 3, 4), (8, 2, 6)] {
            let gr = Growth { m, a: 1, low: vec![0; m as usize] };
            let term = |k: u64| gr.bound(k) - i64::from(int_val(k, p));
            let lp = (p as f64).ln();
            let linear = |k: u64| (k as f64 - m as f64 + 1.0) / m as f64 - (k as f64).ln() / lp;
            let k = truncation(i64::from(n), term, linear, (m as f64 / lp).ceil() as u64 + 1);
            for j in k..k + 500 {
                assert!(term(j) >= i64::from(n), "m={m} p={p} j={j}");
            }
        }
    }
}
