use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sk1lab::lab::*;
use sk1lab::rings::{scalar_log_l, RingDescriptor};
use sk1lab::FiniteGroup;

fn ring(group: &str, p: u64, n: u32) -> Arc<GroupRing> {
    GroupRing::new(FiniteGroup::named(group).unwrap(), &RingDescriptor::zp(p, n)).unwrap()
}

fn el(r: &Arc<GroupRing>, name: &str) -> u32 {
    r.group().element(name).unwrap()
}

fn one_plus_aug<R: rand::Rng>(r: &Arc<GroupRing>, rng: &mut R, scale: i64) -> GroupRingElement {
    GroupRingElement::one(r).add(&GroupRingElement::random_augmentation_zero(r, rng).scale_int(scale))
}

// Exact rational series in ℚ[Q8], reduced mod 2⁴; indices are the a^i x^j
// enumeration 2i + j.
#[test]
fn q8_generator_matches_rational_oracle() {
    let r = ring("Q8", 2, 4);
    let (c, i, j) = (el(&r, "a^2"), el(&r, "a"), el(&r, "x"));
    let u = sk1_generator(&r, &r.model().one(), c, i, j).unwrap();
    let got: Vec<u64> = (0..8).map(|g| u.coeff(g).coords[0]).collect();
    assert_eq!(got, vec![11, 3, 13, 0, 6, 13, 3, 0]);
    assert!(phi_log(&u).unwrap().is_zero());
    let m = j_membership(&u, c).unwrap();
    let w = m.witness.unwrap();
    let hi = r.with_precision(4 + w.shift).unwrap();
    let log = log_one_plus(&u.sub(&GroupRingElement::one(&r))).unwrap();
    assert_eq!(w.expand(&hi, c), *log.value());
}

// ℒ(1 + a − b + 2ab − 2) in ℤ₂[D8] from the exact rational series, mod 2⁴,
// keyed by class representative index.
#[test]
fn d8_group_log_matches_rational_oracle() {
    let r = ring("D8", 2, 4);
    let u = GroupRingElement::from_ints(&r, &[(0, -1), (2, 1), (1, -1), (3, 2)]);
    let l = group_log_l(&u).unwrap();
    for (rep, want) in [(0u32, 10u64), (1, 14), (2, 2), (3, 2), (4, 4)] {
        assert_eq!(l.values()[r.group().class_of(rep)].coords[0], want, "class of {rep}");
    }
}

#[test]
fn scalar_group_log_agrees_with_ring_log() {
    for desc in [RingDescriptor::zp(3, 5), RingDescriptor::witt(2, 2, 5), RingDescriptor::power_series(2, 1, 4, 3)] {
        let r = GroupRing::new(FiniteGroup::cyclic(1).unwrap(), &desc).unwrap();
        let m = r.model();
        let p = r.p();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = m.scale(&m.random(&mut rng), p);
            let u = GroupRingElement::scalar(&r, m.add(&m.one(), &x));
            // (p − F) log u computed directly, divided by the series shift
            let log = log_one_plus(&u.sub(&GroupRingElement::one(&r))).unwrap();
            let s = log.value().coeff(0);
            let wm = log.value().ring().model();
            let t = wm.sub(&wm.scale(&s, p), &wm.frobenius(&s));
            let d = p.pow(log.shift());
            let direct: Vec<u64> = t.coords.iter().map(|&c| (c / d) % m.zpn().modulus()).collect();
            assert_eq!(direct, scalar_log_l(m, &m.add(&m.one(), &x)).unwrap().coords, "{}", desc.label());
        }
    }
}

#[test]
fn group_log_is_additive_on_d8() {
    let r = ring("D8", 2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let u = one_plus_aug(&r, &mut rng, 1);
        let v = one_plus_aug(&r, &mut rng, 1);
        let lhs = group_log_l(&u.mul(&v)).unwrap();
        let rhs = group_log_l(&u).unwrap().add(&group_log_l(&v).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn group_log_is_integral_on_p_groups() {
    for (g, p) in [("C2", 2), ("C4", 2), ("D8", 2), ("Q8", 2), ("C3", 3), ("Heis3", 3)] {
        let r = ring(g, p, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = if g == "Heis3" { 20 } else { 200 };
        for _ in 0..trials {
            let l = group_log_l(&one_plus_aug(&r, &mut rng, 1)).unwrap();
            assert!(l.min_valuation().map_or(true, |v| v >= 1), "{g}");
        }
    }
}

#[test]
fn refine_reproduces_two_commutators_in_d8() {
    let r = ring("D8", 3, 4);
    let one = GroupRingElement::one(&r);
    let mu1 = GroupRingElement::from_ints(&r, &[(1, 1), (2, 2), (5, -1)]);
    let mu2 = GroupRingElement::from_ints(&r, &[(3, 1), (6, 1)]);
    let x = GroupRingElement::commutator(&GroupRingElement::basis(&r, 2), &one.add(&mu1.scale_int(9)))
        .unwrap()
        .mul(&GroupRingElement::commutator(&GroupRingElement::basis(&r, 1), &one.add(&mu2.scale_int(9))).unwrap());
    let f = commutator_refine(&x, 2, 2).unwrap();
    assert_eq!(f.precision, 4);
    assert_eq!(f.product(&one).unwrap(), x);
}

#[test]
fn generator_is_multiplicative_up_to_the_kernel() {
    let r = ring("Q8", 2, 4);
    let (c, i, j) = (el(&r, "a^2"), el(&r, "a"), el(&r, "x"));
    let m = r.model();
    let (a, b) = (m.from_int(1), m.from_int(3));
    let ua = sk1_generator(&r, &a, c, i, j).unwrap();
    let ub = sk1_generator(&r, &b, c, i, j).unwrap();
    let uab = sk1_generator(&r, &m.add(&a, &b), c, i, j).unwrap();
    assert!(phi_log(&ua.mul(&ub).mul(&uab.inverse().unwrap())).unwrap().is_zero());
}

#[test]
fn j_membership_rejects_outside_the_special_set() {
    let r = ring("D8", 2, 4);
    let c = el(&r, "a^2");
    let one = GroupRingElement::one(&r);
    let g = r.group().elements().find(|&g| !r.group().special_set(c).unwrap().contains(&g)).unwrap();
    let e = GroupRingElement::from_ints(&r, &[(0, 1), (c, -1)]);
    let u = one.add(&e.mul(&GroupRingElement::basis(&r, g)).scale_int(2));
    let m = j_membership(&u, c).unwrap();
    assert!(!m.member);
    assert!(!m.phi_log.is_zero());
}

#[test]
fn cyclic_congruence_for_small_primes() {
    for p in [2, 3, 5] {
        assert!(cyclic_congruence_check(p, 5).unwrap());
    }
}

// For a p-group with pᴺ ≥ exponent, ω on basis classes is G → Gᵃᵇ ⊗ ℤ/pᴺ.
#[test]
fn omega_on_basis_is_the_abelianization() {
    for g in ["D8", "Q8", "C4xC2"] {
        let r = ring(g, 2, 3);
        let grp = r.group();
        let lab = ChainLab::new(&r).unwrap();
        let w = |x: u32| lab.omega(&GroupRingElement::basis(&r, x).phi()).unwrap();
        let derived = grp.commutator_subgroup();
        for a in grp.elements() {
            assert_eq!(w(a).is_zero(), derived.contains(&a), "{g} {}", grp.name(a));
            for b in grp.elements() {
                assert_eq!(w(grp.mul(a, b)), lab.add(&w(a), &w(b)));
            }
        }
    }
}

#[test]
fn xi_is_a_homomorphism_on_s3() {
    for p in [2u64, 3] {
        let r = ring("S3", p, 3);
        let lab = ChainLab::new(&r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let s = if p == 2 { 4 } else { 3 };
        for _ in 0..10 {
            let u = one_plus_aug(&r, &mut rng, s);
            let v = GroupRingElement::random(&r, &mut rng);
            let Ok(_) = v.inverse() else { continue };
            assert_eq!(lab.xi(&u.mul(&v)).unwrap(), lab.add(&lab.xi(&u).unwrap(), &lab.xi(&v).unwrap()));
        }
    }
}

#[test]
fn xi_log_identity_on_d8() {
    // over ℤ₂ the Frobenius is trivial, so both sides must vanish
    let mut nonzero = 0;
    for desc in [RingDescriptor::zp(2, 3), RingDescriptor::witt(2, 2, 3)] {
        let r = GroupRing::new(FiniteGroup::named("D8").unwrap(), &desc).unwrap();
        let mut lab = ChainLab::new(&r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        for _ in 0..10 {
            let rep = lab.xi_log_identity(&one_plus_aug(&r, &mut rng, 1)).unwrap();
            assert!(rep.holds, "{rep:?}");
            if desc.base_rank() == 1 {
                assert!(rep.lhs.is_zero());
            }
            nonzero += usize::from(!rep.lhs.is_zero());
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn lab_checks_pass_on_small_groups() {
    for (g, p) in [("C4", 2), ("D8", 2), ("S3", 3), ("S3", 2)] {
        let reports = run_lab_checks(&FiniteGroup::named(g).unwrap(), &RingDescriptor::zp(p, 4), LabSuite::All, 4, 1).unwrap();
        for rep in &reports {
            assert_eq!(rep.failures, 0, "{}", serde_json::to_string(rep).unwrap());
        }
    }
}

fn arb_d8_pair() -> impl Strategy<Value = (u64, u64)> {
    (any::<u64>(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_property(seed in any::<u64>()) {
        let r = ring("Q8", 2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = GroupRingElement::random(&r, &mut rng);
        let y = GroupRingElement::random(&r, &mut rng);
        prop_assert_eq!(x.mul(&y).phi(), y.mul(&x).phi());
        prop_assert_eq!(x.psi().phi(), x.phi().psi_bar());
    }

    #[test]
    fn exp_log_roundtrip(seed in any::<u64>(), g in prop::sample::select(vec!["C4", "D8", "Q8", "C2xC2"])) {
        let r = ring(g, 2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = one_plus_aug(&r, &mut rng, 2);
        let x = u.sub(&GroupRingElement::one(&r));
        let l = log_one_plus(&x).unwrap().to_integral().unwrap();
        prop_assert_eq!(exp(&l).unwrap().to_integral().unwrap(), u);
        let back = log_one_plus(&exp(&l).unwrap().to_integral().unwrap().sub(&GroupRingElement::one(&r))).unwrap();
        prop_assert_eq!(back.to_integral().unwrap(), l);
    }

    #[test]
    fn commutators_are_invisible((s1, s2) in arb_d8_pair()) {
        let r = ring("D8", 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(s1 ^ s2.rotate_left(7));
        let u = one_plus_aug(&r, &mut rng, 1);
        let v = one_plus_aug(&r, &mut rng, 1);
        let w = GroupRingElement::commutator(&u, &v).unwrap();
        prop_assert!(phi_log(&w).unwrap().is_zero());
        let lab = ChainLab::new(&r).unwrap();
        prop_assert!(lab.xi(&w).unwrap().is_zero());
    }

    #[test]
    fn refine_self_verifies(seed in any::<u64>()) {
        let r = ring("S3", 3, 4);
        let one = GroupRingElement::one(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = one.clone();
        for g in [1u32, 2] {
            let mu = GroupRingElement::random(&r, &mut rng).scale_int(3);
            x = x.mul(&GroupRingElement::commutator(&GroupRingElement::basis(&r, g), &one.add(&mu)).unwrap());
        }
        let f = commutator_refine(&x, 1, 3).unwrap();
        prop_assert!(f.product(&one).unwrap().sub(&x).valuation() >= 4);
    }

    #[test]
    fn chains_are_cycles(seed in any::<u64>()) {
        let r = ring("Q8", 2, 3);
        let lab = ChainLab::new(&r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = one_plus_aug(&r, &mut rng, 1);
        let pres = lab.presentation();
        for ch in lab.xi_chains(&u).unwrap() {
            prop_assert!(pres.class_of_cycle(&ch).is_ok());
        }
        for ch in lab.omega_chains(&GroupRingElement::random(&r, &mut rng).phi()).unwrap() {
            prop_assert!(pres.class_of_cycle(&ch).is_ok());
        }
    }

    #[test]
    fn adams_transport_composes(seed in any::<u64>(), h in 0i64..20, k in 0i64..20) {
        let r = ring("D8", 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = GroupRingElement::random(&r, &mut rng).phi();
        prop_assert_eq!(adams_transport(h, &adams_transport(k, &s)), adams_transport(h * k, &s));
        prop_assert_eq!(adams_transport(h, &s).total(), s.total());
    }
}
