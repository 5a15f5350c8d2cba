use proptest::prelude::*;
use sk1lab::rings::*;

fn modpow(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Product in ℤ/M[x]/(m(x)) by schoolbook multiplication and long division.
fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], modulus: u64) -> Vec<u64> {
    let f = m.len() - 1;
    let md = modulus as u128;
    let mut prod = vec![0u128; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u128 * y as u128) % md;
        }
    }
    for d in (f..2 * f).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let j = d - f + i;
            prod[j] = (prod[j] + md - c * mi as u128 % md) % md;
        }
    }
    prod[..f].iter().map(|&x| x as u64).collect()
}

#[test]
fn witt_products_match_polynomial_model() {
    for (p, f, n) in [(2u64, 2usize, 6u32), (2, 3, 5), (3, 2, 4), (5, 3, 3)] {
        let m = RingModel::new(&RingDescriptor::witt(p, f, n)).unwrap();
        let q = p.pow(n);
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % q
        };
        for _ in 0..200 {
            let a: Vec<u64> = (0..f).map(|_| next()).collect();
            let b: Vec<u64> = (0..f).map(|_| next()).collect();
            let got = m.mul(&m.monomial(0, &a), &m.monomial(0, &b));
            let expect = poly_mul_mod(&a, &b, m.minimal_polynomial(), q);
            assert_eq!(got.coords, expect);
        }
        // F fixes ℤ_p and has order f
        let x = m.basis(0, usize::from(f > 1));
        let mut y = x.clone();
        for _ in 0..f {
            y = m.frobenius(&y);
        }
        assert_eq!(y, x);
    }
}

#[test]
fn teichmuller_roots_match_hensel_iteration() {
    for (p, n) in [(3u64, 4u32), (5, 3), (7, 4), (11, 3)] {
        let md = (p as u128).pow(n);
        let mut oracle: Vec<u64> = (1..p)
            .map(|a| {
                // Newton on X^{p−1} − 1
                let mut x = a as u128;
                for _ in 0..2 * n {
                    let fx = (modpow(x, (p - 1) as u128, md) + md - 1) % md;
                    let dfx = (p as u128 - 1) * modpow(x, (p - 2) as u128, md) % md;
                    let inv = modpow(dfx, totient(md) - 1, md);
                    x = (x + md - fx * inv % md) % md;
                }
                x as u64
            })
            .collect();
        oracle.sort_unstable();
        let m = RingModel::new(&RingDescriptor::zp(p, n)).unwrap();
        let fx = frobenius_fixed_units(&m).unwrap();
        let mut found: Vec<u64> = fx.elements(&m).iter().map(|e| e.coords[0]).collect();
        found.sort_unstable();
        assert_eq!(found, oracle, "p = {p}");
    }
    let m = RingModel::new(&RingDescriptor::zp(2, 5)).unwrap();
    assert_eq!(frobenius_fixed_units(&m).unwrap().order, 1);
}

fn totient(pn: u128) -> u128 {
    // pn is a prime power
    let mut p = 2;
    while pn % p != 0 {
        p += 1;
    }
    pn / p * (p - 1)
}

#[test]
fn scalar_log_two_paths() {
    // for u ∈ 1 + pR: ℒ(u) = p·log(u) − log(F(u))
    for d in [RingDescriptor::zp(3, 6), RingDescriptor::witt(2, 2, 7), RingDescriptor::witt(3, 2, 5)] {
        let m = RingModel::new(&d).unwrap();
        let r = *m.zpn();
        for seed in 1..20u64 {
            let y: Vec<u64> = (0..d.base_rank()).map(|i| (seed * 7 + i as u64 * 3) % r.modulus()).collect();
            let yv = m.monomial(0, &y);
            let u = m.add(&m.one(), &m.scale(&yv, d.p));
            let direct = scalar_log_l(&m, &u).unwrap();
            let log = |v: &RingElement| {
                let x = m.sub(v, &m.one());
                // (v − 1)/p, then the series Σ (−1)^{k+1} (p·y)^k / k at one extra digit
                let big = RingModel::new(&d.with_precision(d.n + 4)).unwrap();
                let yb = big.monomial(0, &x.coords.iter().map(|&c| c / d.p).collect::<Vec<_>>());
                let px = big.scale(&yb, d.p);
                let mut acc = big.zero();
                let mut pk = px.clone();
                for k in 1..(4 * d.n as u64 + 8) {
                    let v = sk1lab::modp::int_val(k, d.p);
                    let unit = big.zpn().inv(big.zpn().from_u64(k / d.p.pow(v))).unwrap();
                    let term: Vec<u64> = pk.coords.iter().map(|&c| big.zpn().div_p_pow(c, v)).collect();
                    let mut t = big.scale(&RingElement { coords: term }, unit);
                    if k % 2 == 0 {
                        t = big.neg(&t);
                    }
                    acc = big.add(&acc, &t);
                    pk = big.mul(&pk, &px);
                }
                RingElement { coords: acc.coords.iter().map(|&c| c % r.modulus()).collect() }
            };
            let two_path = m.sub(&m.scale(&log(&u), d.p), &log(&m.frobenius(&u)));
            assert_eq!(direct, two_path, "{}", d.label());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_window_verdicts_are_stable(d in 1usize..10, p in prop::sample::select(vec![2u64, 3, 5]), f in 1usize..3) {
        let ps = RingDescriptor::power_series(p, f, 3, d);
        let lr = RingDescriptor::laurent(p, f, 3, d);
        let iv = RingDescriptor::inverse_var(p, f, 3, d);
        let w = if f == 1 { RingDescriptor::zp(p, 3) } else { RingDescriptor::witt(p, f, 3) };
        prop_assert_eq!(compare_window_stable(&ps, &lr).unwrap().verdict, CoinvariantVerdict::InjectiveTorsionFreeCokernel);
        prop_assert_eq!(compare_window_stable(&iv, &lr).unwrap().verdict, CoinvariantVerdict::Iso);
        prop_assert_eq!(compare_coinvariants(&w, &ps).unwrap().verdict, CoinvariantVerdict::Iso);
        // finite-rank models have window-independent coinvariants
        let (a, b) = (coinvariants(&ps).unwrap(), coinvariants(&ps.with_window(2 * d)).unwrap());
        prop_assert_eq!(a.module(), b.module());
    }

    #[test]
    fn identity_comparison_is_iso(d in 0usize..8, kind in 0usize..3) {
        let desc = match kind {
            0 => RingDescriptor::power_series(2, 2, 3, d),
            1 => RingDescriptor::laurent(3, 1, 3, d),
            _ => RingDescriptor::inverse_var(2, 1, 4, d),
        };
        prop_assert_eq!(compare_coinvariants(&desc, &desc).unwrap().verdict, CoinvariantVerdict::Iso);
    }
}
