use super::*;

fn named(s: &str) -> FiniteGroup {
    FiniteGroup::named(s).unwrap()
}

fn h(g: &FiniteGroup, k: usize) -> Vec<u64> {
    homology(g, k, CoeffModule::Trivial, Scalars::Integers).unwrap().presentation().invariant_factors.clone()
}

#[test]
fn trivial_group_has_empty_boundaries() {
    let g = FiniteGroup::cyclic(1).unwrap();
    for k in 1..=3 {
        let m = bar_boundary(&g, k, CoeffModule::Trivial).unwrap();
        assert_eq!(m.cols, 0);
    }
    assert!(h(&g, 2).is_empty());
}

#[test]
fn boundary_squares_to_zero_on_s3() {
    let g = named("S3");
    for module in [CoeffModule::Trivial, CoeffModule::Conjugation { p: 2 }, CoeffModule::Conjugation { p: 3 }] {
        let d1 = bar_boundary(&g, 1, module).unwrap();
        let d2 = bar_boundary(&g, 2, module).unwrap();
        let d3 = bar_boundary(&g, 3, module).unwrap();
        assert!(d1.composes_to_zero(&d2));
        assert!(d2.composes_to_zero(&d3));
    }
}

#[test]
fn c2_square_boundary_entry() {
    let g = FiniteGroup::cyclic(2).unwrap();
    let d2 = bar_boundary(&g, 2, CoeffModule::Trivial).unwrap();
    // [a|a] ↦ [a] − [1] + [a] = 2[a]
    assert_eq!(d2.get(0, 0), 2);
}

#[test]
fn low_degree_examples() {
    for n in 2..=5 {
        assert!(h(&FiniteGroup::cyclic(n).unwrap(), 2).is_empty());
    }
    assert_eq!(h(&named("C2xC2"), 2), vec![2]);
    for name in ["Q8", "D8"] {
        let g = named(name);
        assert_eq!(h(&g, 1), g.abelianization().presentation.invariant_factors);
    }
    assert!(h(&named("Q8"), 2).is_empty());
    assert_eq!(h(&named("D8"), 2), vec![2]);
    assert_eq!(h(&named("A4"), 2), vec![2]);
    assert_eq!(h(&named("S3"), 2), Vec::<u64>::new());
}

#[test]
fn exterior_square_examples() {
    let e = AbelianGroupPresentation::from_cyclic_orders(&[2, 2, 2], 0);
    assert_eq!(exterior_square(&e).unwrap().invariant_factors, vec![2, 2, 2]);
    let c = AbelianGroupPresentation::from_cyclic_orders(&[9], 0);
    assert!(exterior_square(&c).unwrap().is_trivial());
}

#[test]
fn classes_of_cycles() {
    let g = named("C2xC2");
    let pres = homology(&g, 2, CoeffModule::Trivial, Scalars::Integers).unwrap();
    let zero = BarChain::new(2, CoeffModule::Trivial);
    assert!(pres.class_of_cycle(&zero).unwrap().is_zero());
    let w = BarChain::new(3, CoeffModule::Trivial).with_term(&[1, 2, 3], 0, 1).with_term(&[2, 2, 1], 0, 5);
    assert!(pres.class_of_cycle(&w.boundary(&g).unwrap()).unwrap().is_zero());
    let z = BarChain::commuting_pair(CoeffModule::Trivial, 1, 2, 0);
    assert_eq!(pres.class_of_cycle(&z).unwrap().coords, vec![1]);
    let not_cycle = BarChain::new(2, CoeffModule::Trivial).with_term(&[1, 2], 0, 1);
    assert!(matches!(pres.class_of_cycle(&not_cycle), Err(Error::NotACycle(_))));
}

#[test]
fn representatives_are_cycles_with_unit_coordinates() {
    for name in ["C2xC2", "C4xC2", "D8", "A4", "C3xC3"] {
        let g = named(name);
        let pres = homology(&g, 2, CoeffModule::Trivial, Scalars::ModPrimePower { p: 2, n: 3 }).unwrap();
        for i in 0..pres.cyclic_orders().len() {
            let z = pres.representative(i);
            let c = pres.class_of_cycle(&z).unwrap();
            let mut e = vec![0; c.coords.len()];
            e[i] = 1;
            assert_eq!(c.coords, e, "{name}");
        }
    }
}

#[test]
fn abelian_part() {
    let g = named("C4xC2");
    let ab = h2_ab(&g).unwrap();
    assert!(ab.quotient().is_trivial());
    assert_eq!(ab.span().invariant_factors, vec![2]);
    let q8 = h2_ab(&named("Q8")).unwrap();
    assert!(q8.h2.presentation().is_trivial());
    let d8 = h2_ab(&named("D8")).unwrap();
    assert!(d8.quotient().is_trivial());
}

#[test]
fn shapiro_examples() {
    let d8 = named("D8");
    let s = shapiro_h1(&d8, 2, 3).unwrap();
    assert_eq!(s.components.len(), 1);
    assert_eq!(s.components[0].group.invariant_factors, vec![2, 2]);
    assert!(s.is_isomorphism(), "{:?} {:?} {:?} {:?}", s.images, s.oracle, s.direct.summary(), s.identification);
    let c6 = FiniteGroup::cyclic(6).unwrap();
    let s = shapiro_h1(&c6, 2, 4).unwrap();
    assert_eq!(s.components.len(), 3);
    assert!(s.components.iter().all(|c| c.group.invariant_factors == vec![2]));
    assert!(s.is_isomorphism());
    let s3 = named("S3");
    let s = shapiro_h1(&s3, 2, 3).unwrap();
    assert_eq!(s.oracle.exps, s.direct.p_module(2).exps, "{:?}", s.direct.summary());
    assert!(s.is_isomorphism());
}

#[test]
fn psi_on_h1() {
    let d8 = named("D8");
    let pres = homology(&d8, 1, CoeffModule::Conjugation { p: 2 }, Scalars::ModPrimePower { p: 2, n: 3 }).unwrap();
    let m = induced_psi_on_h(&pres, &[vec![1]]).unwrap();
    for (i, col) in m.iter().enumerate() {
        let mut e = vec![0; col.len()];
        e[i] = 1;
        assert_eq!(col, &e);
    }
    // Ψ∘Ψ is induced by x ↦ x^{p²}
    let s3 = named("C3xS3");
    let p = 2;
    let pres = homology(&s3, 1, CoeffModule::Conjugation { p }, Scalars::ModPrimePower { p, n: 2 }).unwrap();
    let g = pres.group().clone();
    let psi = induced_matrix(&pres, &pres, &|c| power_chain_map(&g, c, p)).unwrap();
    let psi2 = induced_matrix(&pres, &pres, &|c| power_chain_map(&g, c, p * p)).unwrap();
    let k = psi.len();
    for j in 0..k {
        for i in 0..k {
            let v: u64 = (0..k).map(|l| psi[l][i] * psi[j][l]).sum::<u64>() % pres.cyclic_orders()[i];
            assert_eq!(v, psi2[j][i]);
        }
    }
}
