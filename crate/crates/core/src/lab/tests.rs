use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use crate::rings::RingDescriptor;

fn ring(group: &str, p: u64, n: u32) -> Arc<GroupRing> {
    GroupRing::new(FiniteGroup::named(group).unwrap(), &RingDescriptor::zp(p, n)).unwrap()
}

fn el(r: &Arc<GroupRing>, name: &str) -> u32 {
    r.group().element(name).unwrap_or_else(|| panic!("no element {name}"))
}

#[test]
fn inversion_basics() {
    let r = ring("C2", 2, 4);
    let one = GroupRingElement::one(&r);
    assert_eq!(GroupRingElement::invert_one_plus_radical(&GroupRingElement::zero(&r)).unwrap(), one);
    let u = GroupRingElement::from_ints(&r, &[(0, 1), (1, 2)]);
    assert_eq!(u.mul(&u.inverse().unwrap()), one);
    let d8 = ring("D8", 2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = GroupRingElement::random_augmentation_zero(&d8, &mut rng);
    let u = GroupRingElement::one(&d8).add(&x);
    for g in d8.group().elements() {
        assert_eq!(u.conjugate(g).inverse().unwrap(), u.inverse().unwrap().conjugate(g));
    }
}

#[test]
fn zero_divisor_is_not_a_unit() {
    let r = ring("C2", 3, 3);
    let e = GroupRingElement::from_ints(&r, &[(0, 1), (1, 1)]);
    assert!(matches!(e.inverse(), Err(Error::NotAUnit)));
}

#[test]
fn log_and_exp_basics() {
    let r = ring("C4", 2, 5);
    assert!(log_one_plus(&GroupRingElement::zero(&r)).unwrap().is_zero());
    assert!(exp(&GroupRingElement::zero(&r)).unwrap().value().is_one());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let x = GroupRingElement::random_augmentation_zero(&r, &mut rng).scale_int(2);
        let y = GroupRingElement::random_augmentation_zero(&r, &mut rng).scale_int(2);
        let one = GroupRingElement::one(&r);
        let lx = log_one_plus(&x).unwrap().to_integral().unwrap();
        let ly = log_one_plus(&y).unwrap().to_integral().unwrap();
        let lxy = log_one_plus(&one.add(&x).mul(&one.add(&y)).sub(&one)).unwrap().to_integral().unwrap();
        assert_eq!(lxy, lx.add(&ly));
        assert_eq!(exp(&lx).unwrap().to_integral().unwrap(), one.add(&x));
    }
}

#[test]
fn phi_and_psi_basics() {
    let r = ring("S3", 3, 3);
    let g = GroupRingElement::basis(&r, 1);
    let phi = g.phi();
    let k = r.group().class_of(1);
    for c in 0..phi.len() {
        let expect = if c == k { r.model().one() } else { r.model().zero() };
        assert_eq!(phi.values()[c], expect);
    }
    for h in r.group().elements() {
        let t = GroupRingElement::basis(&r, r.group().conj(h, 1)).sub(&g);
        assert!(t.phi().is_zero());
    }
    assert!(GroupRingElement::one(&r).psi().is_one());
    let w = GroupRing::new(FiniteGroup::cyclic(2).unwrap(), &RingDescriptor::witt(2, 2, 3)).unwrap();
    let m = w.model();
    let a = m.basis(0, 1);
    let x = GroupRingElement::from_terms(&w, [(1, a.clone())]);
    assert_eq!(x.psi(), GroupRingElement::scalar(&w, m.frobenius(&a)));
}

#[test]
fn group_log_and_phi_log_fixtures() {
    let r = ring("Q8", 2, 4);
    let one = GroupRingElement::one(&r);
    assert!(group_log_l(&one).unwrap().is_zero());
    assert!(phi_log(&one).unwrap().is_zero());
    // log of a torsion central element vanishes: 2·log c = log c² = 0
    let c = GroupRingElement::basis(&r, el(&r, "a^2"));
    let l = log_one_plus(&c.sub(&one)).unwrap();
    assert!(l.to_integral().unwrap().is_zero());
    assert!(phi_log(&c).unwrap().is_zero());
}

#[test]
fn refine_trivial_cases() {
    let r = ring("D8", 3, 4);
    let one = GroupRingElement::one(&r);
    let f = commutator_refine(&one, 2, 2).unwrap();
    assert!(f.factors.is_empty());
    let mu = GroupRingElement::from_ints(&r, &[(1, 1), (2, -1)]).scale_int(9);
    let x = GroupRingElement::commutator(&GroupRingElement::basis(&r, 3), &one.add(&mu)).unwrap();
    let f = commutator_refine(&x, 2, 2).unwrap();
    assert!(f.product(&one).unwrap().sub(&x).valuation() >= 4);
    assert!(matches!(commutator_refine(&one, 1, 2).map(|_| ()), Ok(())));
    let r2 = ring("D8", 2, 4);
    assert!(matches!(
        commutator_refine(&GroupRingElement::one(&r2), 1, 2),
        Err(Error::PrimePowerTooSmall { p: 2, k: 1 })
    ));
}

#[test]
fn generators_and_membership() {
    let r = ring("Q8", 2, 4);
    let c = el(&r, "a^2");
    let (i, j) = (el(&r, "a"), el(&r, "x"));
    let zero = r.model().zero();
    assert!(sk1_generator(&r, &zero, c, i, j).unwrap().is_one());
    let u = sk1_generator(&r, &r.model().one(), c, i, j).unwrap();
    assert!(!u.is_one());
    assert!(phi_log(&u).unwrap().is_zero());
    let m = j_membership(&GroupRingElement::one(&r), c).unwrap();
    assert!(m.member);
    let w = m.witness.unwrap();
    assert!(w.type1.is_empty() && w.type2.is_empty());
    let m = j_membership(&u, c).unwrap();
    assert!(m.member && m.witness.is_some());
    // a central element outside S_G: φ((1−c)·1) ≠ 0
    let v = GroupRingElement::one(&r).add(&GroupRingElement::from_ints(&r, &[(0, 1), (c, -1)]).scale_int(2));
    let m = j_membership(&v, c).unwrap();
    assert!(!m.member && m.precision_conditional);
    assert!(sk1_generator(&r, &r.model().one(), c, 0, i).is_err());
}

#[test]
fn cyclic_congruence() {
    for p in [2, 3, 5] {
        assert!(cyclic_congruence_check(p, 4).unwrap(), "p = {p}");
    }
}

#[test]
fn chain_maps_basics() {
    let r = ring("D8", 2, 3);
    let lab = ChainLab::new(&r).unwrap();
    assert!(lab.omega(&ClassSum::zero(&r)).unwrap().is_zero());
    assert!(lab.xi(&GroupRingElement::one(&r)).unwrap().is_zero());
    for g in r.group().elements() {
        for h in r.group().elements() {
            let a = lab.omega(&GroupRingElement::basis(&r, g).phi()).unwrap();
            let b = lab.omega(&GroupRingElement::basis(&r, r.group().conj(h, g)).phi()).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn adams_transport_basics() {
    let r = ring("D8", 2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = GroupRingElement::random(&r, &mut rng).phi();
    assert_eq!(adams_transport(5, &s), s);
    assert_eq!(adams_transport(3, &adams_transport(3, &s)), adams_transport(9, &s));
    assert_eq!(adams_transport(2, &s).total().unit, s.total().unit);
}

#[test]
fn lab_report_runs() {
    let g = FiniteGroup::named("C4").unwrap();
    let reports = run_lab_checks(&g, &RingDescriptor::zp(2, 4), LabSuite::All, 3, 1).unwrap();
    assert!(reports.iter().all(|r| r.failures == 0), "{reports:#?}");
}
