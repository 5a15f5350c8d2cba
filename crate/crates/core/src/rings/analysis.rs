//! Frobenius coinvariants R/(1−F)R, comparisons between models, the
//! Frobenius-fixed units and the scalar logarithm u ↦ log(uᵖ/F(u)).

use serde::Serialize;

use super::{RingDescriptor, RingElement, RingKind, RingModel};
use crate::abelian::{AbelianGroupPresentation, HomSummary, PModule, PQuotient};
use crate::error::{Error, Result};
use crate::modp::{floor_log, int_val};

/// R/(1−F)R with the projection from model coordinates.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub descriptor: RingDescriptor,
    pub quotient: PQuotient,
}

impl Coinvariants {
    pub fn module(&self) -> &PModule {
        &self.quotient.module
    }

    pub fn presentation(&self) -> AbelianGroupPresentation {
        self.quotient.module.presentation()
    }

    /// Coordinates of the class of a ring element.
    pub fn project(&self, model: &RingModel, a: &RingElement) -> Vec<u64> {
        let r = model.zpn();
        let m = &self.quotient.module;
        self.quotient
            .functional
            .iter()
            .zip(&m.exps)
            .map(|(row, &e)| {
                let mut c = 0;
                for (&u, &x) in row.iter().zip(&a.coords) {
                    c = r.mul_add(c, u, x);
                }
                c % m.p.pow(e)
            })
            .collect()
    }
}

/// Relations b − F(b) over the basis. On the negative side, basis elements
/// whose Frobenius image leaves the window give no relation.
fn frobenius_relations(model: &RingModel) -> Vec<Vec<u64>> {
    let (lo, hi) = model.window();
    let p = model.p() as i64;
    let mut rels = Vec::new();
    for k in lo..=hi {
        if k < 0 && !model.in_window(p * k) {
            continue;
        }
        for b in 0..model.base_rank() {
            let e = model.basis(k, b);
            rels.push(model.sub(&e, &model.frobenius(&e)).coords);
        }
    }
    rels
}

pub fn coinvariants(desc: &RingDescriptor) -> Result<Coinvariants> {
    let model = RingModel::new(desc)?;
    let m = PModule::new(desc.p, vec![desc.n; model.dim()]);
    let quotient = m.quotient(&frobenius_relations(&model))?;
    Ok(Coinvariants { descriptor: desc.clone(), quotient })
}

/// M ⊗ R/(1−F)R for a finite abelian group M.
pub fn tensor_with_finite(m: &AbelianGroupPresentation, desc: &RingDescriptor) -> Result<AbelianGroupPresentation> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("tensor needs a finite group".into()));
    }
    let exps = m.p_exponents(desc.p);
    let need = exps.iter().copied().max().unwrap_or(0);
    if need > desc.n {
        return Err(Error::Precision { needed: need, have: desc.n });
    }
    let c = coinvariants(desc)?;
    let mut out = Vec::new();
    for &e in &exps {
        for &ce in &c.module().exps {
            out.push(e.min(ce));
        }
    }
    Ok(AbelianGroupPresentation::from_p_exponents(desc.p, &out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoinvariantVerdict {
    Iso,
    SurjectiveOnly,
    InjectiveTorsionFreeCokernel,
    None,
}

impl CoinvariantVerdict {
    /// What the verdict implies for SK₁ of the group rings.
    pub fn sk1_consequence(&self) -> &'static str {
        match self {
            CoinvariantVerdict::Iso => "SK1(R[G]) -> SK1(S[G]) is an isomorphism",
            CoinvariantVerdict::SurjectiveOnly => "SK1(R[G]) -> SK1(S[G]) is surjective",
            CoinvariantVerdict::InjectiveTorsionFreeCokernel => "SK1(R[G]) -> SK1(S[G]) is injective",
            CoinvariantVerdict::None => "no conclusion",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub source: RingDescriptor,
    pub target: RingDescriptor,
    pub source_coinvariants: AbelianGroupPresentation,
    pub target_coinvariants: AbelianGroupPresentation,
    pub map: HomSummary,
    pub verdict: CoinvariantVerdict,
    pub sk1_consequence: String,
}

/// Classifies R/(1−F)R → S/(1−F)S for the natural inclusion R ⊂ S.
pub fn compare_coinvariants(src: &RingDescriptor, dst: &RingDescriptor) -> Result<ComparisonReport> {
    if src.p != dst.p || src.n != dst.n {
        return Err(Error::InvalidInput("rings must share p and N".into()));
    }
    let ms = RingModel::new(src)?;
    let md = RingModel::new(dst)?;
    let (lo, hi) = ms.window();
    for k in lo..=hi {
        for b in 0..ms.base_rank() {
            let e = ms.basis(k, b);
            let lhs = md.embed_from(&ms, &ms.frobenius(&e))?;
            let rhs = md.frobenius(&md.embed_from(&ms, &e)?);
            if lhs != rhs {
                return Err(Error::InvalidInput("embedding does not commute with F".into()));
            }
        }
    }
    let cs = coinvariants(src)?;
    let cd = coinvariants(dst)?;
    let images: Vec<Vec<u64>> = cs
        .quotient
        .sections
        .iter()
        .map(|sec| {
            let a = RingElement { coords: sec.clone() };
            Ok(cd.project(&md, &md.embed_from(&ms, &a)?))
        })
        .collect::<Result<_>>()?;
    let map = cs.module().hom_summary(cd.module(), &images)?;
    let verdict = match (map.injective, map.surjective) {
        (true, true) => CoinvariantVerdict::Iso,
        (false, true) => CoinvariantVerdict::SurjectiveOnly,
        (true, false) if map.cokernel_exps.iter().all(|&e| e == dst.n) => {
            CoinvariantVerdict::InjectiveTorsionFreeCokernel
        }
        _ => CoinvariantVerdict::None,
    };
    Ok(ComparisonReport {
        source: src.clone(),
        target: dst.clone(),
        source_coinvariants: cs.presentation(),
        target_coinvariants: cd.presentation(),
        map,
        verdict,
        sk1_consequence: verdict.sk1_consequence().to_string(),
    })
}

/// Runs the comparison at windows D and 2D and requires equal verdicts.
pub fn compare_window_stable(src: &RingDescriptor, dst: &RingDescriptor) -> Result<ComparisonReport> {
    let a = compare_coinvariants(src, dst)?;
    let b = compare_coinvariants(&src.with_window(2 * src.d), &dst.with_window(2 * dst.d))?;
    if a.verdict != b.verdict {
        return Err(Error::Verification(format!(
            "verdict changes with the window: {:?} at D, {:?} at 2D",
            a.verdict, b.verdict
        )));
    }
    Ok(a)
}

/// The group {u : F(u) = uᵖ} of a base model, cyclic of order q − 1.
#[derive(Clone, Debug)]
pub struct FixedUnits {
    pub order: u64,
    pub generator: RingElement,
}

impl FixedUnits {
    pub fn elements(&self, model: &RingModel) -> Vec<RingElement> {
        let mut out = vec![model.one()];
        for _ in 1..self.order {
            let next = model.mul(out.last().expect("nonempty"), &self.generator);
            out.push(next);
        }
        out
    }
}

pub fn frobenius_fixed_units(model: &RingModel) -> Result<FixedUnits> {
    let desc = model.descriptor();
    if !matches!(desc.kind, RingKind::Zp | RingKind::Witt) {
        return Err(Error::Unsupported(format!("fixed units of {}", desc.label())));
    }
    let p = model.p();
    let f = model.base_rank();
    let q = p.pow(f as u32);
    let order = q - 1;
    let primes: Vec<u64> = crate::abelian::factorize(order).into_iter().map(|e| e.0).collect();
    let one_mod_p = |a: &RingElement| model.reduce_mod(a, 1) == model.one();
    // a generator of F_q^× among residues with digits < p
    let mut gen = None;
    for idx in 1..q {
        let digits: Vec<u64> = (0..f).map(|i| (idx / p.pow(i as u32)) % p).collect();
        let a = model.monomial(0, &digits);
        if !model.is_unit(&a) {
            continue;
        }
        if order == 1 || primes.iter().all(|&l| !one_mod_p(&model.pow(&a, order / l))) {
            gen = Some(a);
            break;
        }
    }
    let mut t = gen.expect("F_q^× is cyclic");
    // Teichmüller lift: a^{q^N}
    for _ in 0..model.n() {
        t = model.pow(&t, q);
    }
    if model.frobenius(&t) != model.pow(&t, p) || model.pow(&t, order) != model.one() {
        return Err(Error::Verification("Teichmüller lift is not Frobenius fixed".into()));
    }
    Ok(FixedUnits { order, generator: t })
}

/// log(1 + p·y) = Σ (−1)^{k+1} p^{k−v_p(k)} (k/p^{v_p(k)})⁻¹ yᵏ.
pub(crate) fn log_one_plus_p(model: &RingModel, y: &RingElement) -> RingElement {
    let r = model.zpn();
    let p = model.p();
    let n = model.n();
    let mut out = model.zero();
    let mut yk = y.clone();
    let mut k = 1u64;
    // terms vanish once k − log_p(k) ≥ N
    while (k as i64) - (floor_log(k, p) as i64) < i64::from(n) {
        let v = int_val(k, p);
        let shift = k as u32 - v;
        if shift < n {
            let unit = r.inv(r.from_u64(k / p.pow(v))).expect("prime-to-p part");
            let mut c = r.mul(unit, r.p_pow(shift));
            if k % 2 == 0 {
                c = r.neg(c);
            }
            out = model.add(&out, &model.scale(&yk, c));
        }
        k += 1;
        yk = model.mul(&yk, y);
    }
    out
}

/// ℒ(u) = log(uᵖ·F(u)⁻¹), which lies in pR.
pub fn scalar_log_l(model: &RingModel, u: &RingElement) -> Result<RingElement> {
    let p = model.p();
    let w = model.mul(&model.pow(u, p), &model.inverse(&model.frobenius(u))?);
    let x = model.sub(&w, &model.one());
    if model.valuation(&x) < 1 {
        return Err(Error::Hypothesis("uᵖ/F(u) is not congruent to 1 mod p".into()));
    }
    let r = model.zpn();
    let y = RingElement { coords: x.coords.iter().map(|&c| r.div_p_pow(c, 1)).collect() };
    Ok(log_one_plus_p(model, &y))
}

/// T((1/p)ℒ(u) ⊕ θ(u)) computed with the lift u·m of θ(u) for m ∈ 𝓜(R):
/// (1/p)ℒ(u) − (1/p)ℒ(u·m), which vanishes mod p^{N−1}.
pub fn exact_sequence_defect(model: &RingModel, u: &RingElement, m: &RingElement) -> Result<RingElement> {
    let l1 = scalar_log_l(model, u)?;
    let l2 = scalar_log_l(model, &model.mul(u, m))?;
    let r = model.zpn();
    let d = model.sub(&l1, &l2);
    Ok(RingElement { coords: d.coords.iter().map(|&c| r.div_p_pow(c, 1)).collect() })
}
