//! SK₁(R[G]) as ⊕ over Ψ-orbits of p-regular classes of H̄₂(C_G(g), ℤ) ⊗ R/(F−1)R,
//! cross-checked by the Ψ-covariants of H̄₂(G, R[G_r]) and by triviality
//! certificates.

use serde::Serialize;

use crate::abelian::{AbelianGroupPresentation, PModule};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::homology::{
    commuting_cycles, h2_abelian_part, homology, induced_psi_on_h, CoeffModule, HomologyClass, Scalars,
};
use crate::modp::int_val;
use crate::rings::{compare_window_stable, tensor_with_finite, CoinvariantVerdict, ComparisonReport, RingDescriptor, RingKind, RingModel};


pub const REPORT_SCHEMA: &str = "sk1lab.sk1/1";

/// Hypotheses on R that the formula uses and the engine does not verify.
pub const ASSUMED_HYPOTHESES: [&str; 4] = [
    "R is p-adically complete",
    "F: R -> R is a Z_p-algebra endomorphism with F(r) = r^p mod pR",
    "pR is a prime ideal of R",
    "SK1(R (x) W) = 1 for the valuation ring W of every finite unramified extension of Q_p",
];

#[derive(Clone, Debug, Serialize)]
pub struct PsiOrbit {
    /// Classes in Ψ order starting at the representative.
    pub classes: Vec<usize>,
    pub size: usize,
    pub rep_class: usize,
    pub representative: u32,
    pub representative_name: String,
    pub centralizer_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiOrbitStructure {
    pub group: String,
    pub p: u64,
    pub orbits: Vec<PsiOrbit>,
}

/// Orbits of class(g) ↦ class(gᵖ) on the p-regular classes; each orbit is
/// represented by its smallest class index.
pub fn psi_orbits(g: &FiniteGroup, p: u64) -> PsiOrbitStructure {
    let regular = g.p_regular_classes(p);
    let mut seen = vec![false; g.classes().len()];
    let mut orbits = Vec::new();
    for &c in &regular {
        if seen[c] {
            continue;
        }
        let mut classes = vec![c];
        seen[c] = true;
        let mut k = g.class_of(g.pow(g.class_rep(c), p as i64));
        while k != c {
            seen[k] = true;
            classes.push(k);
            k = g.class_of(g.pow(g.class_rep(k), p as i64));
        }
        let rep = g.class_rep(c);
        orbits.push(PsiOrbit {
            size: classes.len(),
            classes,
            rep_class: c,
            representative: rep,
            representative_name: g.name(rep).to_string(),
            centralizer_order: g.centralizer(rep).len(),
        });
    }
    PsiOrbitStructure { group: g.label().to_string(), p, orbits }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub rep_class: usize,
    pub representative: String,
    pub orbit_size: usize,
    pub centralizer_order: usize,
    /// p-part of H̄₂(C_G(g), ℤ).
    pub hbar2: AbelianGroupPresentation,
    pub coinvariants: AbelianGroupPresentation,
    pub tensor: AbelianGroupPresentation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// G abelian: every centralizer is G and every H̄₂ vanishes.
    Abelian,
    /// A normal abelian subgroup with cyclic quotient.
    NormalAbelianCyclicQuotient { subgroup: Vec<String>, index: usize, quotient_generator: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct SK1Report {
    pub schema: String,
    pub group: String,
    pub group_order: usize,
    pub group_fingerprint: String,
    pub ring: RingDescriptor,
    pub ring_label: String,
    pub p: u64,
    pub precision: u32,
    pub orbits: Vec<OrbitRecord>,
    pub total: AbelianGroupPresentation,
    pub certificates: Vec<Certificate>,
    pub assumed_hypotheses: Vec<String>,
}

impl SK1Report {
    pub fn is_trivial(&self) -> bool {
        self.total.is_trivial()
    }
}

/// p-part of H̄₂(G, ℤ), computed p-locally.
pub fn hbar2_p(g: &FiniteGroup, p: u64) -> Result<AbelianGroupPresentation> {
    if g.order() as u64 % p != 0 {
        return Ok(AbelianGroupPresentation::trivial());
    }
    let part = h2_abelian_part(g, CoeffModule::Trivial, Scalars::LocalAt { p })?;
    Ok(part.quotient().p_part(p))
}

/// SK₁(R[G]) ≅ ⊕_j H̄₂(G_{i_j}, ℤ) ⊗ R/(F−1)R.
pub fn sk1(desc: &RingDescriptor, g: &FiniteGroup) -> Result<SK1Report> {
    desc.validate()?;
    let p = desc.p;
    let structure = psi_orbits(g, p);
    let coinv = crate::rings::coinvariants(desc)?.presentation();
    let mut orbits = Vec::new();
    let mut total = AbelianGroupPresentation::trivial();
    for o in &structure.orbits {
        let (cg, _) = g.centralizer_group(o.representative);
        let hbar2 = hbar2_p(&cg, p).map_err(|e| match e {
            Error::GroupTooLarge { order, limit } => Error::InvalidInput(format!(
                "centralizer of {} has order {order} beyond the homology limit {limit}",
                o.representative_name
            )),
            e => e,
        })?;
        let tensor = tensor_with_finite(&hbar2, desc)?;
        total = total.direct_sum(&tensor);
        orbits.push(OrbitRecord {
            rep_class: o.rep_class,
            representative: o.representative_name.clone(),
            orbit_size: o.size,
            centralizer_order: o.centralizer_order,
            hbar2,
            coinvariants: coinv.clone(),
            tensor,
        });
    }
    let certificates = triviality_certificates(g);
    if !certificates.is_empty() && !total.is_trivial() {
        return Err(Error::Verification(format!(
            "{} has a triviality certificate but the formula gives {}",
            g.label(),
            total
        )));
    }
    Ok(SK1Report {
        schema: REPORT_SCHEMA.into(),
        group: g.label().into(),
        group_order: g.order(),
        group_fingerprint: g.fingerprint(),
        ring: desc.clone(),
        ring_label: desc.label(),
        p,
        precision: desc.n,
        orbits,
        total,
        certificates,
        assumed_hypotheses: ASSUMED_HYPOTHESES.iter().map(|s| s.to_string()).collect(),
    })
}

/// H̄₂(G, ℤ) ⊗ R/(1−F)R for a p-group G.
pub fn theta_target_pgroup(desc: &RingDescriptor, g: &FiniteGroup) -> Result<AbelianGroupPresentation> {
    if !g.is_p_group(desc.p) {
        return Err(Error::Hypothesis(format!("{} is not a {}-group", g.label(), desc.p)));
    }
    tensor_with_finite(&hbar2_p(g, desc.p)?, desc)
}

/// Ψ-covariants of H̄₂(G, ℤ_(p)[G_r]) ⊗ R_N, computed on the whole group:
/// H₂ with conjugation coefficients, modulo commuting-pair classes, modulo
/// the image of 1 − Ψ.
pub fn covariants_direct(desc: &RingDescriptor, g: &FiniteGroup) -> Result<AbelianGroupPresentation> {
    desc.validate()?;
    let p = desc.p;
    let n = desc.n;
    let model = RingModel::new(desc)?;
    let f = model.dim();
    let module = CoeffModule::Conjugation { p };
    let h2 = homology(g, 2, module, Scalars::LocalAt { p })?;
    let orders = h2.cyclic_orders().to_vec();
    if orders.is_empty() {
        return Ok(AbelianGroupPresentation::trivial());
    }
    // H₂ ⊗ R_N: every factor is capped at pᴺ
    let exps: Vec<u32> = orders.iter().map(|&o| int_val(o, p).min(n)).collect();
    let frob: Vec<Vec<u64>> = (0..f)
        .map(|b| {
            let mut e = model.zero();
            e.coords[b] = 1;
            model.frobenius(&e).coords
        })
        .collect();
    let psi = induced_psi_on_h(&h2, &frob)?;
    let k = orders.len();
    let big = PModule::new(p, (0..k).flat_map(|i| std::iter::repeat(exps[i]).take(f)).collect());
    let modulus = |idx: usize| p.pow(exps[idx / f]);
    let mut gens: Vec<Vec<u64>> = Vec::new();
    let classes: Vec<HomologyClass> =
        commuting_cycles(g, module).iter().map(|z| h2.class_of_cycle(z)).collect::<Result<_>>()?;
    for c in &classes {
        if c.is_zero() {
            continue;
        }
        for a in 0..f {
            let mut v = vec![0u64; k * f];
            for i in 0..k {
                v[i * f + a] = c.coords[i];
            }
            gens.push(v);
        }
    }
    for (j, img) in psi.iter().enumerate() {
        let mut v: Vec<u64> = img.iter().enumerate().map(|(i, &x)| (modulus(i) - x % modulus(i)) % modulus(i)).collect();
        v[j] = (v[j] + 1) % modulus(j);
        gens.push(v);
    }
    Ok(big.quotient(&gens)?.module.presentation())
}

/// Named model pairs for the SK₁ comparison maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingPair {
    /// W ⊂ W[[t]]
    WPowerSeries,
    /// W⟨⟨t⁻¹⟩⟩ ⊂ W{{t}}
    WinfLaurent,
    /// W[[t]] ⊂ W{{t}}
    PowerSeriesLaurent,
}

impl RingPair {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "W-PowerSeries" | "W-W[[t]]" => Ok(RingPair::WPowerSeries),
            "Winf-Laurent" => Ok(RingPair::WinfLaurent),
            "PowerSeries-Laurent" | "W[[t]]-Laurent" => Ok(RingPair::PowerSeriesLaurent),
            _ => Err(Error::InvalidInput(format!(
                "unknown ring pair `{s}` (expected W-PowerSeries, Winf-Laurent or PowerSeries-Laurent)"
            ))),
        }
    }

    pub fn descriptors(&self, p: u64, f: usize, n: u32, d: usize) -> (RingDescriptor, RingDescriptor) {
        let base = |kind| RingDescriptor { kind, p, n, f, d };
        let w = if f == 1 { RingDescriptor::zp(p, n) } else { RingDescriptor::witt(p, f, n) };
        match self {
            RingPair::WPowerSeries => (w, base(RingKind::PowerSeries)),
            RingPair::WinfLaurent => (base(RingKind::InverseVar), base(RingKind::Laurent)),
            RingPair::PowerSeriesLaurent => (base(RingKind::PowerSeries), base(RingKind::Laurent)),
        }
    }

    /// The map on SK₁ the pair is known to induce.
    pub fn expected(&self) -> CoinvariantVerdict {
        match self {
            RingPair::WPowerSeries | RingPair::WinfLaurent => CoinvariantVerdict::Iso,
            RingPair::PowerSeriesLaurent => CoinvariantVerdict::InjectiveTorsionFreeCokernel,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingComparison {
    pub coinvariants: ComparisonReport,
    pub verdict: CoinvariantVerdict,
    pub expected: Option<CoinvariantVerdict>,
    pub sk1_statement: String,
    /// Totals for a sample group, when one is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_sk1: Option<AbelianGroupPresentation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_sk1: Option<AbelianGroupPresentation>,
}

/// Lifts the coinvariant comparison R/(1−F)R → S/(1−F)S, stable in the
/// window, to the statement about SK₁(R[G]) → SK₁(S[G]).
pub fn ring_comparison_sk1(
    src: &RingDescriptor,
    dst: &RingDescriptor,
    pair: Option<RingPair>,
    g: Option<&FiniteGroup>,
) -> Result<RingComparison> {
    let coinvariants = compare_window_stable(src, dst)?;
    let verdict = coinvariants.verdict;
    let (group, source_sk1, target_sk1) = match g {
        Some(g) => {
            let a = sk1(src, g)?.total;
            let b = sk1(dst, g)?.total;
            let consistent = match verdict {
                CoinvariantVerdict::Iso => a == b,
                CoinvariantVerdict::InjectiveTorsionFreeCokernel => {
                    a.order().zip(b.order()).map_or(false, |(x, y)| x <= y)
                }
                _ => true,
            };
            if !consistent {
                return Err(Error::Verification(format!("SK1 totals {a} and {b} contradict the verdict {verdict:?}")));
            }
            (Some(g.label().to_string()), Some(a), Some(b))
        }
        None => (None, None, None),
    };
    Ok(RingComparison {
        sk1_statement: verdict.sk1_consequence().to_string(),
        verdict,
        expected: pair.map(|p| p.expected()),
        coinvariants,
        group,
        source_sk1,
        target_sk1,
    })
}

/// Witnesses that force SK₁(R[G]) = 1 for every admissible R.
pub fn triviality_certificates(g: &FiniteGroup) -> Vec<Certificate> {
    let mut out = Vec::new();
    if g.is_abelian() {
        out.push(Certificate::Abelian);
    }
    if let Some(w) = g.cyclic_quotient_witness() {
        out.push(Certificate::NormalAbelianCyclicQuotient {
            subgroup: w.generator_names.clone(),
            index: w.index,
            quotient_generator: g.name(w.quotient_generator).to_string(),
        });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub group: String,
    pub order: usize,
    pub total: AbelianGroupPresentation,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub ring: RingDescriptor,
    pub min_order: usize,
    pub max_order: usize,
    pub p_groups_only: bool,
    pub rows: Vec<ScanRow>,
    /// First group, in library order, with nontrivial SK₁.
    pub first_nontrivial: Option<String>,
    /// Groups with nontrivial SK₁ and no triviality certificate.
    pub uncertified_nontrivial: Vec<String>,
}

/// Runs the engine over the built-in library within an order range.
pub fn scan(desc: &RingDescriptor, min_order: usize, max_order: usize, p_groups_only: bool) -> Result<ScanReport> {
    let lib = crate::group::catalog::library(max_order)?;
    let mut rows = Vec::new();
    for g in lib {
        if g.order() < min_order || (p_groups_only && !g.is_p_group(desc.p)) {
            continue;
        }
        let r = sk1(desc, &g)?;
        rows.push(ScanRow {
            group: r.group.clone(),
            order: r.group_order,
            certified: !r.certificates.is_empty(),
            total: r.total,
        });
    }
    let first_nontrivial = rows.iter().find(|r| !r.total.is_trivial()).map(|r| r.group.clone());
    let uncertified_nontrivial =
        rows.iter().filter(|r| !r.certified && !r.total.is_trivial()).map(|r| r.group.clone()).collect();
    Ok(ScanReport {
        ring: desc.clone(),
        min_order,
        max_order,
        p_groups_only,
        rows,
        first_nontrivial,
        uncertified_nontrivial,
    })
}
