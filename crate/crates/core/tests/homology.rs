use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use sk1lab::abelian::AbelianGroupPresentation;
use sk1lab::group::catalog;
use sk1lab::homology::*;
use sk1lab::linalg::{smith, BigMatrix};
use sk1lab::FiniteGroup;

fn big(m: &SparseMatrix) -> BigMatrix {
    let d = m.to_dense();
    let rows = (0..d.rows()).map(|i| d.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
    BigMatrix::from_rows(rows)
}

/// Exact integral homology from dense Smith forms of the bar boundaries.
fn oracle(g: &FiniteGroup, k: usize) -> AbelianGroupPresentation {
    let dk = bar_boundary(g, k, CoeffModule::Trivial).unwrap();
    let dk1 = bar_boundary(g, k + 1, CoeffModule::Trivial).unwrap();
    let sk = smith(&big(&dk), false);
    let sk1 = smith(&big(&dk1), false);
    let torsion: Vec<u64> = sk1.diag.iter().filter(|d| !d.is_zero()).map(|d| d.to_u64().unwrap()).collect();
    let free = dk.cols - sk.rank - sk1.rank;
    AbelianGroupPresentation::from_cyclic_orders(&torsion, free)
}

#[test]
fn agrees_with_exact_oracle_on_small_groups() {
    let mut groups = catalog::small_groups(8).unwrap();
    groups.push(FiniteGroup::named("C3xC3").unwrap());
    groups.push(FiniteGroup::named("D10").unwrap());
    for g in &groups {
        for k in 1..=2 {
            let h = homology(g, k, CoeffModule::Trivial, Scalars::Integers).unwrap();
            assert_eq!(h.presentation(), &oracle(g, k), "H{k}({})", g.label());
        }
    }
}

#[test]
fn abelian_groups_follow_exterior_square() {
    for g in catalog::abelian_groups_up_to(32).unwrap() {
        let h = homology(&g, 2, CoeffModule::Trivial, Scalars::Integers).unwrap();
        let ab = g.abelianization().presentation;
        assert_eq!(h.presentation(), &exterior_square(&ab).unwrap(), "{}", g.label());
        let part = h2_ab(&g).unwrap();
        assert!(part.quotient().is_trivial(), "{}", g.label());
    }
}

#[test]
fn universal_coefficients_mod_prime_powers() {
    for g in catalog::small_groups(16).unwrap() {
        let h1 = homology(&g, 1, CoeffModule::Trivial, Scalars::Integers).unwrap();
        let h2 = homology(&g, 2, CoeffModule::Trivial, Scalars::Integers).unwrap();
        for (p, n) in [(2u64, 1u32), (2, 3), (3, 2)] {
            let m = p.pow(n);
            let cyc = |a: &AbelianGroupPresentation| -> Vec<u64> {
                a.invariant_factors.iter().map(|&d| num_integer::gcd(d, m)).collect()
            };
            let mut expect = cyc(h2.presentation());
            expect.extend(cyc(h1.presentation()));
            let expect = AbelianGroupPresentation::from_cyclic_orders(&expect, 0);
            let got = homology(&g, 2, CoeffModule::Trivial, Scalars::ModPrimePower { p, n }).unwrap();
            assert_eq!(got.presentation(), &expect, "{} mod {m}", g.label());
        }
    }
}

#[test]
fn schur_bound_tripwire() {
    for g in catalog::library(32).unwrap() {
        let h = homology(&g, 2, CoeffModule::Trivial, Scalars::Integers).unwrap();
        let exp = (1..g.order() as u32).fold(1u64, |acc, x| num_integer::lcm(acc, g.elem_order(x)));
        for d in &h.presentation().invariant_factors {
            assert_eq!(exp % d, 0, "{}", g.label());
        }
    }
}

#[test]
fn shapiro_direct_matches_centralizer_sum() {
    for g in catalog::small_groups(16).unwrap() {
        for p in [2, 3] {
            let s = shapiro_h1(&g, p, 2).unwrap();
            assert!(s.is_isomorphism(), "{} p={p}", g.label());
        }
    }
}

#[test]
fn nonabelian_part_vanishes_up_to_32() {
    // regression fixture: no group in the library has H̄₂ ≠ 0
    let mut first = None;
    for g in catalog::library(32).unwrap() {
        if g.is_p_group(2) && !h2_ab(&g).unwrap().quotient().is_trivial() {
            first.get_or_insert(g.label().to_string());
        }
    }
    assert_eq!(first, None);
}

#[test]
fn size_bound() {
    let g = FiniteGroup::cyclic(33).unwrap();
    assert!(homology(&g, 2, CoeffModule::Trivial, Scalars::Integers).is_err());
    assert!(homology_with_limit(&g, 2, CoeffModule::Trivial, Scalars::Integers, 64).is_ok());
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    let names = ["C4", "S3", "D8", "Q8", "C2xC2", "A4", "C3xC3", "D10"];
    proptest::sample::select(names.to_vec()).prop_map(|n| FiniteGroup::named(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_of_boundary_vanishes(
        g in small_group(),
        conj in any::<bool>(),
        seed in proptest::collection::vec((any::<u32>(), any::<u32>(), any::<u32>(), -5i128..5), 1..8),
    ) {
        let module = if conj { CoeffModule::Conjugation { p: 2 } } else { CoeffModule::Trivial };
        let basis = module.basis(&g);
        let n = g.order() as u32;
        let mut c = BarChain::new(3, module);
        for (a, b, x, k) in seed {
            let t = [1 + a % (n - 1), 1 + b % (n - 1), 1 + (a ^ b) % (n - 1)];
            c.add_term(&t, basis[x as usize % basis.len()], k);
        }
        let dd = c.boundary(&g).unwrap().boundary(&g).unwrap();
        prop_assert!(dd.is_empty());
    }

    #[test]
    fn boundaries_have_zero_class(
        g in small_group(),
        seed in proptest::collection::vec((any::<u32>(), any::<u32>(), any::<u32>(), -5i128..5), 1..6),
    ) {
        let n = g.order() as u32;
        let mut c = BarChain::new(3, CoeffModule::Trivial);
        for (a, b, e, k) in seed {
            c.add_term(&[1 + a % (n - 1), 1 + b % (n - 1), 1 + e % (n - 1)], 0, k);
        }
        let pres = homology(&g, 2, CoeffModule::Trivial, Scalars::Integers).unwrap();
        prop_assert!(pres.class_of_cycle(&c.boundary(&g).unwrap()).unwrap().is_zero());
    }
}
