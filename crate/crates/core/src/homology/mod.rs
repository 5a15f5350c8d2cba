//! Group homology in low degrees through the normalized bar complex.

mod bar;
mod reduce;
mod solve;

use serde::{Deserialize, Serialize};

pub use bar::{bar_boundary, BarChain, CoeffModule, SparseMatrix};

use crate::abelian::{factorize, AbelianGroupPresentation, PModule, PQuotient};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::modp::{int_val, Zpn};
use bar::Indexer;
use solve::{BlockSolve, Mode};

/// Default order bound for homology computations.
pub const DEFAULT_MAX_ORDER: usize = 32;
/// Hard order bound reachable through the override.
pub const HARD_MAX_ORDER: usize = 64;

/// Scalar ring of the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scalars {
    /// ℤ: all primes dividing |G|.
    Integers,
    /// ℤ localized at p: the p-primary part of the integral homology.
    LocalAt { p: u64 },
    /// ℤ/pᴺ.
    ModPrimePower { p: u64, n: u32 },
}

struct Part {
    prime: u64,
    block: usize,
    solve: BlockSolve,
}

/// Presentation of H_k(G, M) as a direct sum of cyclic p-groups.
pub struct HomologyPresentation {
    group: FiniteGroup,
    degree: usize,
    module: CoeffModule,
    scalars: Scalars,
    blocks: Vec<Indexer>,
    block_of: Vec<u32>,
    parts: Vec<Part>,
    /// (part, local factor) per global factor.
    factors: Vec<(usize, usize)>,
    orders: Vec<u64>,
    primes: Vec<u64>,
    presentation: AbelianGroupPresentation,
}

/// A homology class in the coordinates of its presentation's cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClass {
    pub coords: Vec<u64>,
    pub orders: Vec<u64>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Serializable summary of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub group: String,
    pub degree: usize,
    pub module: CoeffModule,
    pub scalars: Scalars,
    pub cyclic_orders: Vec<u64>,
    pub invariant_factors: Vec<u64>,
}

pub fn homology(
    g: &FiniteGroup,
    degree: usize,
    module: CoeffModule,
    scalars: Scalars,
) -> Result<HomologyPresentation> {
    homology_with_limit(g, degree, module, scalars, DEFAULT_MAX_ORDER)
}

pub fn homology_with_limit(
    g: &FiniteGroup,
    degree: usize,
    module: CoeffModule,
    scalars: Scalars,
    max_order: usize,
) -> Result<HomologyPresentation> {
    if !(1..=2).contains(&degree) {
        return Err(Error::InvalidInput(format!("homology degree {degree} outside 1..=2")));
    }
    let limit = max_order.min(HARD_MAX_ORDER);
    if degree == 2 && g.order() > limit || g.order() > HARD_MAX_ORDER {
        return Err(Error::GroupTooLarge { order: g.order(), limit });
    }
    module.validate(g)?;
    let n = g.order() as u64;
    let rings: Vec<(Zpn, Mode)> = match scalars {
        Scalars::Integers => factorize(n)
            .into_iter()
            .map(|(q, v)| Ok((Zpn::new(q, 3 * v + 4)?, Mode::Integral { bound: v })))
            .collect::<Result<_>>()?,
        Scalars::LocalAt { p } => {
            let v = int_val(n, p);
            if v == 0 {
                vec![]
            } else {
                vec![(Zpn::new(p, 3 * v + 4)?, Mode::Integral { bound: v })]
            }
        }
        Scalars::ModPrimePower { p, n: big_n } => {
            if big_n == 0 {
                return Err(Error::InvalidInput("precision N must be positive".into()));
            }
            vec![(Zpn::new(p, big_n)?, Mode::Truncated)]
        }
    };
    let mut block_of = vec![bar::NONE; g.order()];
    let blocks: Vec<Indexer> = module
        .blocks(g)
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            for &x in &b {
                block_of[x as usize] = i as u32;
            }
            Indexer::new(g, b)
        })
        .collect();
    let mut parts = Vec::new();
    if g.order() > 1 {
        for &(ring, mode) in &rings {
            for (bi, ix) in blocks.iter().enumerate() {
                let solve = BlockSolve::new(g, module, ix, degree, ring, mode)?;
                parts.push(Part { prime: ring.p(), block: bi, solve });
            }
        }
    }
    let mut factors = Vec::new();
    let mut orders = Vec::new();
    let mut primes = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        for (li, &e) in part.solve.exps.iter().enumerate() {
            factors.push((pi, li));
            orders.push(part.prime.pow(e));
            primes.push(part.prime);
        }
    }
    let presentation = AbelianGroupPresentation::from_cyclic_orders(&orders, 0);
    Ok(HomologyPresentation {
        group: g.clone(),
        degree,
        module,
        scalars,
        blocks,
        block_of,
        parts,
        factors,
        orders,
        primes,
        presentation,
    })
}

impl HomologyPresentation {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> CoeffModule {
        self.module
    }

    pub fn scalars(&self) -> Scalars {
        self.scalars
    }

    pub fn presentation(&self) -> &AbelianGroupPresentation {
        &self.presentation
    }

    /// Orders of the cyclic factors in coordinate order.
    pub fn cyclic_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn factor_primes(&self) -> &[u64] {
        &self.primes
    }

    /// Module basis element carried by each factor's block.
    pub fn factor_blocks(&self) -> Vec<Vec<u32>> {
        self.factors.iter().map(|&(pi, _)| self.blocks[self.parts[pi].block].elems().to_vec()).collect()
    }

    /// Indices of the factors at prime p.
    pub fn p_indices(&self, p: u64) -> Vec<usize> {
        (0..self.primes.len()).filter(|&i| self.primes[i] == p).collect()
    }

    /// The p-primary part as a [`PModule`], in the order of `p_indices`.
    pub fn p_module(&self, p: u64) -> PModule {
        PModule::new(p, self.p_indices(p).iter().map(|&i| int_val(self.orders[i], p)).collect())
    }

    pub fn summary(&self) -> HomologySummary {
        HomologySummary {
            group: self.group.label().to_string(),
            degree: self.degree,
            module: self.module,
            scalars: self.scalars,
            cyclic_orders: self.orders.clone(),
            invariant_factors: self.presentation.invariant_factors.clone(),
        }
    }

    fn check_shape(&self, chain: &BarChain) -> Result<()> {
        if chain.degree() != self.degree || chain.module() != self.module {
            return Err(Error::InvalidInput("chain does not belong to this complex".into()));
        }
        for (t, x, _) in chain.terms() {
            if t.iter().any(|&h| h as usize >= self.group.order())
                || self.block_of.get(x as usize).map_or(true, |&b| b == bar::NONE)
            {
                return Err(Error::InvalidInput("chain term outside the complex".into()));
            }
        }
        Ok(())
    }

    /// Number of boundary terms that do not vanish in the coefficient ring.
    pub fn boundary_defect(&self, chain: &BarChain) -> Result<usize> {
        let d = chain.boundary(&self.group)?;
        Ok(match self.scalars {
            Scalars::ModPrimePower { p, n } => {
                let m = (p as i128).pow(n);
                d.terms().filter(|(_, _, c)| c.rem_euclid(m) != 0).count()
            }
            _ => d.len(),
        })
    }

    pub fn class_of_cycle(&self, chain: &BarChain) -> Result<HomologyClass> {
        self.check_shape(chain)?;
        let defect = self.boundary_defect(chain)?;
        if defect > 0 {
            return Err(Error::NotACycle(defect));
        }
        self.class_unchecked(chain)
    }

    /// Coordinates without the exact cycle check (for chains that are cycles
    /// up to a high power of p).
    pub fn class_unchecked(&self, chain: &BarChain) -> Result<HomologyClass> {
        self.check_shape(chain)?;
        let mut per_block: Vec<Vec<(usize, i128)>> = vec![Vec::new(); self.blocks.len()];
        for (t, x, c) in chain.terms() {
            let b = self.block_of[x as usize] as usize;
            let idx = self.blocks[b].encode(t, x).expect("checked shape");
            per_block[b].push((idx, c));
        }
        let mut coords = vec![0u64; self.orders.len()];
        let mut offset = 0;
        for part in &self.parts {
            let ring = &part.solve.ring;
            let m = ring.modulus() as i128;
            let col: Vec<(u32, u64)> = per_block[part.block]
                .iter()
                .map(|&(i, c)| (i as u32, c.rem_euclid(m) as u64))
                .collect();
            let local = part.solve.coords(&col)?;
            coords[offset..offset + local.len()].copy_from_slice(&local);
            offset += local.len();
        }
        Ok(HomologyClass { coords, orders: self.orders.clone() })
    }

    /// A cycle representing the i-th cyclic factor.
    pub fn representative(&self, i: usize) -> BarChain {
        let (pi, li) = self.factors[i];
        let part = &self.parts[pi];
        let ix = &self.blocks[part.block];
        let ring = &part.solve.ring;
        let mut out = BarChain::new(self.degree, self.module);
        let mut t = Vec::new();
        for (idx, c) in part.solve.representative(li) {
            let x = ix.decode(idx as usize, self.degree, &mut t);
            out.add_term(&t, x, ring.signed(c) as i128);
        }
        out
    }

    /// Whether the coordinate functional of each factor is exact (not p-local).
    pub fn is_truncated(&self) -> bool {
        self.parts.iter().all(|p| !p.solve.is_integral())
    }
}

/// Λ²A, the second homology of an abelian group.
pub fn exterior_square(a: &AbelianGroupPresentation) -> Result<AbelianGroupPresentation> {
    a.exterior_square()
}

/// Cycles ([a|b] − [b|a])⊗x over pairwise commuting a, b, x with x in the module basis.
pub fn commuting_cycles(g: &FiniteGroup, module: CoeffModule) -> Vec<BarChain> {
    let mut out = Vec::new();
    for x in module.basis(g) {
        let cx: Vec<u32> = match module {
            CoeffModule::Trivial => g.elements().collect(),
            CoeffModule::Conjugation { .. } => g.centralizer(x),
        };
        for (i, &a) in cx.iter().enumerate() {
            for &b in &cx[i + 1..] {
                if a != 0 && b != 0 && g.mul(a, b) == g.mul(b, a) {
                    out.push(BarChain::commuting_pair(module, a, b, x));
                }
            }
        }
    }
    out
}

/// The span of commuting-pair classes inside H₂ and the quotient by it.
pub struct AbelianPart {
    pub h2: HomologyPresentation,
    /// Per prime: the span, and the quotient with its functional.
    pub primes: Vec<(u64, PModule, PQuotient)>,
}

impl AbelianPart {
    pub fn span(&self) -> AbelianGroupPresentation {
        self.primes
            .iter()
            .fold(AbelianGroupPresentation::trivial(), |acc, (_, s, _)| acc.direct_sum(&s.presentation()))
    }

    /// H̄₂ = H₂ / H₂ᵃᵇ.
    pub fn quotient(&self) -> AbelianGroupPresentation {
        self.primes
            .iter()
            .fold(AbelianGroupPresentation::trivial(), |acc, (_, _, q)| acc.direct_sum(&q.module.presentation()))
    }

    pub fn p_quotient(&self, p: u64) -> Option<&PQuotient> {
        self.primes.iter().find(|e| e.0 == p).map(|e| &e.2)
    }
}

/// H₂ᵃᵇ and H̄₂ for the given coefficients (degree 2).
pub fn h2_abelian_part(g: &FiniteGroup, module: CoeffModule, scalars: Scalars) -> Result<AbelianPart> {
    let h2 = homology(g, 2, module, scalars)?;
    let classes: Vec<HomologyClass> = commuting_cycles(g, module)
        .iter()
        .map(|z| h2.class_of_cycle(z))
        .collect::<Result<_>>()?;
    let mut primes: Vec<u64> = h2.factor_primes().to_vec();
    primes.dedup();
    let mut out = Vec::new();
    for p in primes {
        let idx = h2.p_indices(p);
        let m = h2.p_module(p);
        let gens: Vec<Vec<u64>> =
            classes.iter().map(|c| idx.iter().map(|&i| c.coords[i]).collect()).filter(|v: &Vec<u64>| v.iter().any(|&x| x != 0)).collect();
        let span = m.subgroup(&gens)?;
        let q = m.quotient(&gens)?;
        out.push((p, span, q));
    }
    Ok(AbelianPart { h2, primes: out })
}

/// H₂ᵃᵇ(G, ℤ) and H̄₂(G, ℤ).
pub fn h2_ab(g: &FiniteGroup) -> Result<AbelianPart> {
    h2_abelian_part(g, CoeffModule::Trivial, Scalars::Integers)
}

/// One summand H₁(C_G(x), ℤ/pᴺ) of the Shapiro decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct ShapiroComponent {
    pub class: usize,
    pub representative: u32,
    pub centralizer_order: usize,
    pub group: AbelianGroupPresentation,
}

/// ⊕ᵢ Gᵢᵃᵇ ⊗ ℤ/pᴺ against H₁(G, (ℤ/pᴺ)[G_r]).
pub struct ShapiroH1 {
    pub components: Vec<ShapiroComponent>,
    pub direct: HomologyPresentation,
    pub oracle: PModule,
    /// Image in the direct presentation of each oracle generator.
    pub images: Vec<Vec<u64>>,
    pub identification: crate::abelian::HomSummary,
}

impl ShapiroH1 {
    pub fn is_isomorphism(&self) -> bool {
        self.identification.injective && self.identification.surjective
    }
}

pub fn shapiro_h1(g: &FiniteGroup, p: u64, n: u32) -> Result<ShapiroH1> {
    let module = CoeffModule::Conjugation { p };
    let direct = homology(g, 1, module, Scalars::ModPrimePower { p, n })?;
    let mut components = Vec::new();
    let mut exps = Vec::new();
    let mut images = Vec::new();
    for c in g.p_regular_classes(p) {
        let x = g.class_rep(c);
        let (cg, emb) = g.centralizer_group(x);
        let ab = cg.abelianization();
        let mut local = Vec::new();
        for (k, &o) in ab.orders.iter().enumerate() {
            let v = int_val(o, p);
            if v == 0 {
                continue;
            }
            let e = v.min(n);
            // an element mapping to the k-th basis vector, then its p-part
            let h = cg
                .elements()
                .find(|&h| ab.coords[h as usize].iter().enumerate().all(|(i, &a)| a == u64::from(i == k)))
                .expect("abelianization is surjective");
            let hp = cg.pow(h, (o / p.pow(v)) as i64);
            let chain = BarChain::new(1, module).with_term(&[emb[hp as usize]], x, 1);
            let cls = direct.class_of_cycle(&chain)?;
            images.push(direct.p_indices(p).iter().map(|&i| cls.coords[i]).collect());
            exps.push(e);
            local.push(p.pow(e));
        }
        components.push(ShapiroComponent {
            class: c,
            representative: x,
            centralizer_order: cg.order(),
            group: AbelianGroupPresentation::from_cyclic_orders(&local, 0),
        });
    }
    let oracle = PModule::new(p, exps);
    let identification = oracle.hom_summary(&direct.p_module(p), &images)?;
    Ok(ShapiroH1 { components, direct, oracle, images, identification })
}

/// Power map x ↦ x^k on the module basis.
pub fn power_chain_map(g: &FiniteGroup, chain: &BarChain, k: u64) -> BarChain {
    chain.map_coefficients(chain.module(), |x| g.pow(x, k as i64))
}

/// Checks ∂∘f = f∘∂ on every basis chain of degrees k and k+1.
pub fn check_chain_map(
    g: &FiniteGroup,
    module: CoeffModule,
    k: usize,
    f: &dyn Fn(&BarChain) -> BarChain,
) -> Result<()> {
    let basis = module.basis(g);
    for deg in [k, k + 1] {
        let mut t = vec![1u32; deg];
        let elems: Vec<u32> = g.elements().filter(|&h| h != 0).collect();
        if elems.is_empty() {
            return Ok(());
        }
        let total = elems.len().pow(deg as u32);
        for idx in 0..total {
            let mut r = idx;
            for slot in t.iter_mut().rev() {
                *slot = elems[r % elems.len()];
                r /= elems.len();
            }
            for &x in &basis {
                let c = BarChain::new(deg, module).with_term(&t, x, 1);
                let lhs = f(&c).boundary(g)?;
                let rhs = f(&c.boundary(g)?);
                if lhs != rhs {
                    return Err(Error::Verification("coefficient map is not a chain map".into()));
                }
            }
        }
    }
    Ok(())
}

/// Matrix (columns = images of source factors) of the map induced by a chain map.
pub fn induced_matrix(
    src: &HomologyPresentation,
    dst: &HomologyPresentation,
    f: &dyn Fn(&BarChain) -> BarChain,
) -> Result<Vec<Vec<u64>>> {
    (0..src.cyclic_orders().len())
        .map(|i| {
            let z = f(&src.representative(i));
            let cls = if dst.is_truncated() { dst.class_of_cycle(&z)? } else { dst.class_unchecked(&z)? };
            Ok(cls.coords)
        })
        .collect()
}

/// Ψ on H_k(G, R[G_r]) with R free of rank f over ℤ_p and Frobenius matrix
/// `frob` (column b = F(e_b)): the map Ψ_ℤ ⊗ F on H ⊗ R.
/// Basis order: factor i, then ring coordinate a. Returns images of basis vectors.
pub fn induced_psi_on_h(pres: &HomologyPresentation, frob: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let CoeffModule::Conjugation { p } = pres.module() else {
        return Err(Error::InvalidInput("Ψ needs the conjugation module".into()));
    };
    let g = pres.group();
    let psi = |c: &BarChain| power_chain_map(g, c, p);
    check_chain_map(g, pres.module(), pres.degree(), &psi)?;
    let mz = induced_matrix(pres, pres, &psi)?;
    Ok(tensor_with_frobenius(&mz, pres.cyclic_orders(), frob))
}

/// Kronecker product of a factor-coordinate matrix with a ring endomorphism.
pub fn tensor_with_frobenius(mz: &[Vec<u64>], orders: &[u64], frob: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let f = frob.len();
    let k = orders.len();
    let mut out = Vec::with_capacity(k * f);
    for (j, col) in mz.iter().enumerate() {
        let _ = j;
        for b in 0..f {
            let mut img = vec![0u64; k * f];
            for i in 0..k {
                for a in 0..f {
                    let m = orders[i] as u128;
                    img[i * f + a] = ((col[i] as u128 * frob[b][a] as u128) % m) as u64;
                }
            }
            out.push(img);
        }
    }
    out
}

#[cfg(test)]
mod tests;
