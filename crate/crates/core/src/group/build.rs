//! Group constructions and the descriptor format.

use super::{FiniteGroup, MAX_ORDER};
use crate::error::{Error, Result};
use crate::modp::is_prime;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Input format for groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Table {
        table: Vec<Vec<u32>>,
        #[serde(default)]
        names: Option<Vec<String>>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
    Named {
        name: String,
    },
    /// C_n ⋊ C_m with the generator of C_m acting by a ↦ aʳ.
    Semidirect {
        n: u64,
        m: u64,
        r: u64,
    },
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupDescriptor::Table { table, names } => FiniteGroup::from_table("table", table, names.clone()),
            GroupDescriptor::Perm { degree, generators } => FiniteGroup::perm_group("perm", *degree, generators),
            GroupDescriptor::Named { name } => FiniteGroup::named(name),
            GroupDescriptor::Semidirect { n, m, r } => FiniteGroup::cyclic_semidirect(*n, *m, *r),
        }
    }

    /// Accepts a group name or inline JSON.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            Ok(serde_json::from_str(t)?)
        } else {
            Ok(GroupDescriptor::Named { name: t.to_string() })
        }
    }
}

fn check_order(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidGroup("order must be positive".into()));
    }
    if n as usize > MAX_ORDER {
        return Err(Error::GroupTooLarge { order: n as usize, limit: MAX_ORDER });
    }
    Ok(n as usize)
}

fn power_name(base: &str, k: u64) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn word(parts: &[String]) -> String {
    let w: Vec<&str> = parts.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
    if w.is_empty() {
        "1".into()
    } else {
        w.join("")
    }
}

impl FiniteGroup {
    /// Builds a group from elements of some ambient structure with a product.
    fn from_product<T: Clone>(
        label: &str,
        elems: &[T],
        names: Vec<String>,
        index: impl Fn(&T) -> usize,
        prod: impl Fn(&T, &T) -> T,
    ) -> FiniteGroup {
        let n = elems.len();
        let mut flat = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                flat[i * n + j] = index(&prod(a, b)) as u32;
            }
        }
        FiniteGroup::from_flat(label, n, flat, names)
    }

    pub fn cyclic(n: u64) -> Result<FiniteGroup> {
        let n = check_order(n)?;
        let elems: Vec<usize> = (0..n).collect();
        let names = (0..n).map(|i| word(&[power_name("a", i as u64)])).collect();
        Ok(Self::from_product(&format!("C{n}"), &elems, names, |&x| x, |a, b| (a + b) % n))
    }

    /// C_n ⋊ C_m, b·a·b⁻¹ = aʳ; requires rᵐ ≡ 1 mod n.
    pub fn cyclic_semidirect(n: u64, m: u64, r: u64) -> Result<FiniteGroup> {
        let order = check_order(n * m)?;
        if n == 0 || m == 0 {
            return Err(Error::InvalidGroup("factor orders must be positive".into()));
        }
        let r = r % n;
        let mut rm = 1 % n;
        for _ in 0..m {
            rm = rm * r % n;
        }
        if rm != 1 % n || num_integer::gcd(r, n) != 1 {
            return Err(Error::InvalidGroup(format!("{r} does not define an action of C{m} on C{n}")));
        }
        let elems: Vec<(u64, u64)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
        let names = elems
            .iter()
            .map(|&(i, j)| word(&[power_name("a", i), power_name("b", j)]))
            .collect();
        let rpow = |j: u64| (0..j).fold(1 % n, |acc, _| acc * r % n);
        let g = Self::from_product(
            &format!("C{n}:C{m}[{r}]"),
            &elems,
            names,
            |&(i, j)| (i * m + j) as usize,
            |&(i, j), &(k, l)| ((i + rpow(j) * k) % n, (j + l) % m),
        );
        debug_assert_eq!(g.order(), order);
        Ok(g)
    }

    /// Dihedral group of the given (even) order.
    pub fn dihedral(order: u64) -> Result<FiniteGroup> {
        if order < 2 || order % 2 == 1 {
            return Err(Error::InvalidGroup(format!("dihedral order {order} must be even")));
        }
        let n = order / 2;
        let mut g = Self::cyclic_semidirect(n, 2, n.saturating_sub(1).max(1))?;
        g.label = format!("D{order}");
        Ok(g)
    }

    /// Dicyclic group of order 4n: a^{2n} = 1, x² = aⁿ, x·a·x⁻¹ = a⁻¹.
    pub fn dicyclic(n: u64) -> Result<FiniteGroup> {
        check_order(4 * n)?;
        let m = 2 * n;
        let elems: Vec<(u64, u64)> = (0..m).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
        let names = elems
            .iter()
            .map(|&(i, j)| word(&[power_name("a", i), power_name("x", j)]))
            .collect();
        let label = if n.is_power_of_two() { format!("Q{}", 4 * n) } else { format!("Dic{}", 4 * n) };
        Ok(Self::from_product(
            &label,
            &elems,
            names,
            |&(i, j)| (i * 2 + j) as usize,
            |&(i, j), &(k, l)| {
                let k = if j == 1 { (m - k) % m } else { k };
                let mut a = (i + k) % m;
                if j + l == 2 {
                    a = (a + n) % m;
                }
                (a, (j + l) % 2)
            },
        ))
    }

    /// Upper unitriangular 3×3 matrices over 𝔽_p.
    pub fn heisenberg(p: u64) -> Result<FiniteGroup> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        check_order(p * p * p)?;
        let elems: Vec<(u64, u64, u64)> = (0..p)
            .flat_map(|a| (0..p).flat_map(move |b| (0..p).map(move |c| (a, b, c))))
            .collect();
        let names = elems
            .iter()
            .map(|&(a, b, c)| word(&[power_name("x", a), power_name("y", b), power_name("z", c)]))
            .collect();
        // (a,b,c) = xᵃ·yᵇ·zᶜ with [x,y] central
        Ok(Self::from_product(
            &format!("Heis{p}"),
            &elems,
            names,
            |&(a, b, c)| ((a * p + b) * p + c) as usize,
            |&(a, b, c), &(d, e, f)| ((a + d) % p, (b + e) % p, (c + f + b * d) % p),
        ))
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
        let (n, m) = (g.order(), h.order());
        check_order((n * m) as u64)?;
        let elems: Vec<(u32, u32)> = (0..n as u32).flat_map(|a| (0..m as u32).map(move |b| (a, b))).collect();
        let names = elems
            .iter()
            .map(|&(a, b)| match (a, b) {
                (0, 0) => "1".into(),
                (a, 0) => g.name(a).to_string(),
                (0, b) => format!("{}'", h.name(b)),
                (a, b) => format!("{}{}'", g.name(a), h.name(b)),
            })
            .collect();
        Ok(Self::from_product(
            &format!("{}x{}", g.label(), h.label()),
            &elems,
            names,
            |&(a, b)| a as usize * m + b as usize,
            |&(a, b), &(c, d)| (g.mul(a, c), h.mul(b, d)),
        ))
    }

    /// N ⋊ H where `action[h]` is the automorphism of N (as a permutation of indices).
    pub fn semidirect(label: &str, nn: &FiniteGroup, hh: &FiniteGroup, action: &[Vec<u32>]) -> Result<FiniteGroup> {
        let (n, m) = (nn.order(), hh.order());
        check_order((n * m) as u64)?;
        if action.len() != m {
            return Err(Error::InvalidGroup("one automorphism per element of H expected".into()));
        }
        for (h, phi) in action.iter().enumerate() {
            let ok = phi.len() == n
                && (0..n as u32).all(|a| (0..n as u32).all(|b| phi[nn.mul(a, b) as usize] == nn.mul(phi[a as usize], phi[b as usize])));
            if !ok {
                return Err(Error::InvalidGroup(format!("action of element {h} is not an endomorphism")));
            }
        }
        for h in 0..m as u32 {
            for k in 0..m as u32 {
                let hk = hh.mul(h, k) as usize;
                if (0..n).any(|a| action[hk][a] != action[h as usize][action[k as usize][a] as usize]) {
                    return Err(Error::InvalidGroup("action is not a homomorphism".into()));
                }
            }
        }
        let elems: Vec<(u32, u32)> = (0..n as u32).flat_map(|a| (0..m as u32).map(move |b| (a, b))).collect();
        let names = elems
            .iter()
            .map(|&(a, b)| match (a, b) {
                (0, 0) => "1".into(),
                (a, 0) => nn.name(a).to_string(),
                (0, b) => hh.name(b).to_string(),
                (a, b) => format!("{}{}", nn.name(a), hh.name(b)),
            })
            .collect();
        Ok(Self::from_product(
            label,
            &elems,
            names,
            |&(a, b)| a as usize * m + b as usize,
            |&(a, h), &(b, k)| (nn.mul(a, action[h as usize][b as usize]), hh.mul(h, k)),
        ))
    }

    /// Closure of permutations (images of 0..degree); product is composition σ∘τ.
    pub fn perm_group(label: &str, degree: usize, generators: &[Vec<u32>]) -> Result<FiniteGroup> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| (x as usize) >= degree || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(Error::InvalidGroup("generator is not a permutation of the given degree".into()));
            }
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let compose = |s: &Vec<u32>, t: &Vec<u32>| -> Vec<u32> { t.iter().map(|&x| s[x as usize]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        index.insert(id, 0);
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                let y = compose(&elems[i], g);
                if !index.contains_key(&y) {
                    if elems.len() >= MAX_ORDER {
                        return Err(Error::GroupTooLarge { order: elems.len() + 1, limit: MAX_ORDER });
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        Ok(Self::from_product(label, &elems, names, |p| index[p], compose))
    }

    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(t);
            let c: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            gens.push(c);
        }
        Self::perm_group(&format!("S{n}"), n.max(1), &gens)
    }

    pub fn alternating(n: usize) -> Result<FiniteGroup> {
        let gens: Vec<Vec<u32>> = (2..n)
            .map(|k| {
                let mut p: Vec<u32> = (0..n as u32).collect();
                p[0] = 1;
                p[1] = k as u32;
                p[k] = 0;
                p
            })
            .collect();
        Self::perm_group(&format!("A{n}"), n.max(1), &gens)
    }

    /// Aut-free construction helper: abelian group with the given cyclic factors.
    pub fn abelian(factors: &[u64]) -> Result<FiniteGroup> {
        let mut g = Self::cyclic(1)?;
        let mut label = Vec::new();
        for &f in factors {
            g = Self::direct_product(&g, &Self::cyclic(f)?)?;
            label.push(format!("C{f}"));
        }
        g.label = if label.is_empty() { "C1".into() } else { label.join("x") };
        Ok(g)
    }

    /// Named groups: C<n>, D<2n>, Q<2^k>, Dic<4n>, E<p>^<k>, Heis<p>, S<n>, A<n>,
    /// catalog names, and products joined by `x`.
    pub fn named(name: &str) -> Result<FiniteGroup> {
        let name = name.trim();
        if let Some(g) = super::catalog::lookup(name)? {
            return Ok(g);
        }
        if name.contains('x') {
            let mut g: Option<FiniteGroup> = None;
            for part in name.split('x') {
                let h = Self::named(part)?;
                g = Some(match g {
                    None => h,
                    Some(g) => Self::direct_product(&g, &h)?,
                });
            }
            let mut g = g.expect("nonempty");
            g.label = name.to_string();
            return Ok(g);
        }
        let num = |s: &str| -> Result<u64> { s.parse::<u64>().map_err(|_| Error::UnknownGroup(name.to_string())) };
        let mut g = if let Some(rest) = name.strip_prefix("Heis") {
            Self::heisenberg(num(rest)?)?
        } else if let Some(rest) = name.strip_prefix("Dic") {
            let o = num(rest)?;
            if o % 4 != 0 {
                return Err(Error::UnknownGroup(name.into()));
            }
            Self::dicyclic(o / 4)?
        } else if let Some(rest) = name.strip_prefix('E') {
            let (p, k) = rest.split_once('^').ok_or_else(|| Error::UnknownGroup(name.into()))?;
            let (p, k) = (num(p)?, num(k)?);
            if !is_prime(p) {
                return Err(Error::UnknownGroup(name.into()));
            }
            check_order(p.checked_pow(k as u32).unwrap_or(u64::MAX))?;
            Self::abelian(&vec![p; k as usize])?
        } else if let Some(rest) = name.strip_prefix('C') {
            Self::cyclic(num(rest)?)?
        } else if let Some(rest) = name.strip_prefix('D') {
            Self::dihedral(num(rest)?)?
        } else if let Some(rest) = name.strip_prefix('Q') {
            let o = num(rest)?;
            if o < 8 || !o.is_power_of_two() {
                return Err(Error::UnknownGroup(name.into()));
            }
            Self::dicyclic(o / 4)?
        } else if let Some(rest) = name.strip_prefix('S') {
            Self::symmetric(num(rest)? as usize)?
        } else if let Some(rest) = name.strip_prefix('A') {
            Self::alternating(num(rest)? as usize)?
        } else {
            return Err(Error::UnknownGroup(name.into()));
        };
        g.label = name.to_string();
        Ok(g)
    }
}

fn cycle_notation(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] as usize == s {
            continue;
        }
        let mut c = vec![s + 1];
        seen[s] = true;
        let mut x = p[s] as usize;
        while x != s {
            seen[x] = true;
            c.push(x + 1);
            x = p[x] as usize;
        }
        let body: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}
