use super::*;
use crate::abelian::AbelianGroupPresentation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(d: &RingDescriptor) -> RingModel {
    RingModel::new(d).unwrap()
}

#[test]
fn descriptor_json() {
    let d = RingDescriptor::parse(r#"{"kind":"Laurent","p":2,"N":5,"f":2,"D":6}"#).unwrap();
    assert_eq!(d, RingDescriptor::laurent(2, 2, 5, 6));
    let z = RingDescriptor::parse(r#"{"kind":"Zp","p":3,"N":4}"#).unwrap();
    assert_eq!(z, RingDescriptor::zp(3, 4));
    assert!(RingDescriptor::parse(r#"{"kind":"Zp","p":4,"N":4}"#).is_err());
}

#[test]
fn unit_and_geometric_series() {
    let m = model(&RingDescriptor::power_series(3, 1, 3, 4));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = m.random(&mut rng);
    assert_eq!(m.mul(&a, &m.one()), a);
    let u = m.add(&m.one(), &m.scale(&m.basis(1, 0), 3));
    let v = m.inverse(&u).unwrap();
    // 1 − 3T + 9T² − 27T³ ≡ 1 − 3T + 9T² mod 27
    let expect: Vec<u64> = vec![1, 27 - 3, 9, 0, 0];
    assert_eq!(v.coords, expect);
    assert!(m.inverse(&m.scale(&m.one(), 3)).is_err());
}

#[test]
fn frobenius_examples() {
    let z = model(&RingDescriptor::zp(5, 3));
    let a = z.from_int(7);
    assert_eq!(z.frobenius(&a), a);
    let s = model(&RingDescriptor::power_series(2, 1, 3, 8));
    assert_eq!(s.frobenius(&s.basis(1, 0)), s.basis(2, 0));
    let w = model(&RingDescriptor::witt(2, 2, 6));
    let x = w.basis(0, 1);
    let fx = w.frobenius(&x);
    assert_ne!(fx, x);
    assert_eq!(w.frobenius(&fx), x);
}

#[test]
fn frobenius_congruence_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let descs = [
        RingDescriptor::zp(3, 4),
        RingDescriptor::witt(2, 3, 5),
        RingDescriptor::witt(3, 2, 4),
        RingDescriptor::power_series(2, 2, 4, 6),
        RingDescriptor::laurent(3, 1, 3, 6),
        RingDescriptor::inverse_var(2, 2, 3, 6),
    ];
    for d in &descs {
        let m = model(d);
        for _ in 0..1000 {
            let a = if d.kind == RingKind::Laurent || d.kind == RingKind::InverseVar {
                m.random_small_support(&mut rng)
            } else {
                m.random(&mut rng)
            };
            let lhs = m.reduce_mod(&m.frobenius(&a), 1);
            let rhs = m.reduce_mod(&m.pow(&a, d.p), 1);
            assert_eq!(lhs, rhs, "{}", d.label());
        }
    }
}

#[test]
fn coinvariant_examples() {
    let z = coinvariants(&RingDescriptor::zp(3, 4)).unwrap();
    assert_eq!(z.module().exps, vec![4]);
    for f in 2..=4 {
        let w = coinvariants(&RingDescriptor::witt(2, f, 5)).unwrap();
        assert_eq!(w.module().exps, vec![5], "f = {f}");
    }
    let base = coinvariants(&RingDescriptor::witt(2, 2, 4)).unwrap();
    for d in 0..=16 {
        let s = coinvariants(&RingDescriptor::power_series(2, 2, 4, d)).unwrap();
        assert_eq!(s.module(), base.module(), "D = {d}");
    }
}

#[test]
fn tensor_examples() {
    let zp = RingDescriptor::zp(2, 4);
    let zero = AbelianGroupPresentation::trivial();
    assert!(tensor_with_finite(&zero, &zp).unwrap().is_trivial());
    let cp = AbelianGroupPresentation::from_cyclic_orders(&[2], 0);
    assert_eq!(tensor_with_finite(&cp, &zp).unwrap(), cp);
    let c4 = AbelianGroupPresentation::from_cyclic_orders(&[4], 0);
    assert_eq!(tensor_with_finite(&c4, &RingDescriptor::witt(2, 2, 3)).unwrap(), c4);
    assert!(matches!(
        tensor_with_finite(&c4, &RingDescriptor::witt(2, 2, 1)),
        Err(Error::Precision { .. })
    ));
}

#[test]
fn comparisons() {
    let (p, f, n, d) = (2, 2, 4, 6);
    let w = RingDescriptor::witt(p, f, n);
    let ps = RingDescriptor::power_series(p, f, n, d);
    let lr = RingDescriptor::laurent(p, f, n, d);
    let iv = RingDescriptor::inverse_var(p, f, n, d);
    assert_eq!(compare_window_stable(&w, &ps.with_window(0)).unwrap().verdict, CoinvariantVerdict::Iso);
    assert_eq!(compare_coinvariants(&w, &ps).unwrap().verdict, CoinvariantVerdict::Iso);
    assert_eq!(compare_window_stable(&iv, &lr).unwrap().verdict, CoinvariantVerdict::Iso);
    let r = compare_window_stable(&ps, &lr).unwrap();
    assert_eq!(r.verdict, CoinvariantVerdict::InjectiveTorsionFreeCokernel);
    // one copy of W for every 1 ≤ k ≤ D prime to p
    assert_eq!(r.map.cokernel_exps.len(), f * (1..=d).filter(|k| k % p as usize != 0).count());
    let same = compare_coinvariants(&lr, &lr).unwrap();
    assert_eq!(same.verdict, CoinvariantVerdict::Iso);
    assert!(compare_coinvariants(&lr, &ps).is_err());
}

#[test]
fn fixed_units() {
    let m = model(&RingDescriptor::zp(7, 4));
    let fx = frobenius_fixed_units(&m).unwrap();
    assert_eq!(fx.order, 6);
    let els = fx.elements(&m);
    assert!(els.contains(&m.one()));
    for u in &els[1..] {
        assert_ne!(m.reduce_mod(u, 1), m.one());
        assert_eq!(m.frobenius(u), m.pow(u, 7));
    }
    let w = model(&RingDescriptor::witt(2, 2, 5));
    assert_eq!(frobenius_fixed_units(&w).unwrap().order, 3);
    assert!(frobenius_fixed_units(&model(&RingDescriptor::power_series(2, 1, 3, 2))).is_err());
}

#[test]
fn scalar_logarithm() {
    let m = model(&RingDescriptor::zp(3, 6));
    assert!(m.is_zero(&scalar_log_l(&m, &m.one()).unwrap()));
    let fx = frobenius_fixed_units(&m).unwrap();
    for u in fx.elements(&m) {
        assert!(m.is_zero(&scalar_log_l(&m, &u).unwrap()));
    }
    // F = id on ℤ_p, so ℒ(u) = (p − 1)·log(u) for u ∈ 1 + pℤ_p
    let u = m.from_int(4);
    let direct = scalar_log_l(&m, &u).unwrap();
    let log_u = analysis::log_one_plus_p(&m, &m.one());
    assert_eq!(direct, m.scale(&log_u, 2));
    assert!(m.valuation(&direct) >= 1);
}

#[test]
fn scalar_logarithm_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [RingDescriptor::zp(5, 5), RingDescriptor::witt(2, 2, 6), RingDescriptor::power_series(3, 1, 4, 5)] {
        let m = model(&d);
        let mut k = 0;
        while k < 50 {
            let (u, v) = (m.random(&mut rng), m.random(&mut rng));
            if !m.is_unit(&u) || !m.is_unit(&v) {
                continue;
            }
            k += 1;
            let lhs = scalar_log_l(&m, &m.mul(&u, &v)).unwrap();
            let rhs = m.add(&scalar_log_l(&m, &u).unwrap(), &scalar_log_l(&m, &v).unwrap());
            assert_eq!(lhs, rhs, "{}", d.label());
        }
    }
}

#[test]
fn exact_sequence_and_fixed_units_meet_trivially() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [RingDescriptor::zp(7, 5), RingDescriptor::witt(3, 2, 4), RingDescriptor::witt(2, 3, 6)] {
        let m = model(&d);
        let fx = frobenius_fixed_units(&m).unwrap();
        let els = fx.elements(&m);
        for u in &els[1..] {
            assert_ne!(m.reduce_mod(u, 1), m.one(), "fixed unit in 1 + pR");
        }
        let mut k = 0;
        while k < 20 {
            let u = m.random(&mut rng);
            if !m.is_unit(&u) {
                continue;
            }
            k += 1;
            for mm in &els {
                let defect = exact_sequence_defect(&m, &u, mm).unwrap();
                assert!(m.is_zero(&m.reduce_mod(&defect, d.n - 1)));
            }
        }
    }
}
