//! Built-in group library: every group of order ≤ 16, all abelian groups of
//! order ≤ 64, and assorted families up to order 32.

use super::FiniteGroup;
use crate::abelian::factorize;
use crate::error::Result;

/// Partitions of k into parts, descending.
fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn rec(k: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            cur.push(part);
            rec(k - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant-factor lists (descending) of all abelian groups of order n.
pub fn abelian_types(n: u64) -> Vec<Vec<u64>> {
    let mut types: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for t in &types {
            for part in partitions(e) {
                let mut f = t.clone();
                while f.len() < part.len() {
                    f.push(1);
                }
                for (i, &x) in part.iter().enumerate() {
                    f[i] *= p.pow(x);
                }
                next.push(f);
            }
        }
        types = next;
    }
    types
}

fn abelian_label(t: &[u64]) -> String {
    if t.is_empty() {
        return "C1".into();
    }
    t.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x")
}

pub fn abelian_groups(n: u64) -> Result<Vec<FiniteGroup>> {
    abelian_types(n)
        .into_iter()
        .map(|t| {
            let mut g = FiniteGroup::abelian(&t)?;
            g.label = abelian_label(&t);
            Ok(g)
        })
        .collect()
}

pub fn abelian_groups_up_to(max: u64) -> Result<Vec<FiniteGroup>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(abelian_groups(n)?);
    }
    Ok(out)
}

fn relabel(mut g: FiniteGroup, label: &str) -> FiniteGroup {
    g.label = label.to_string();
    g
}

/// (C4×C2) ⋊ C2 with the involution (x, y) ↦ (x + s·y, y + t·x).
fn c4c2_by_c2(label: &str, s: u32, t: u32) -> Result<FiniteGroup> {
    let n = FiniteGroup::abelian(&[4, 2])?;
    let h = FiniteGroup::cyclic(2)?;
    // index of (x, y) in C4×C2 is 2x + y
    let phi: Vec<u32> = (0..8u32)
        .map(|i| {
            let (x, y) = (i / 2, i % 2);
            let nx = (x + s * y) % 4;
            let ny = (y + t * x) % 2;
            2 * nx + ny
        })
        .collect();
    let id: Vec<u32> = (0..8).collect();
    FiniteGroup::semidirect(label, &n, &h, &[id, phi])
}

/// Non-abelian groups and families with special names.
pub fn lookup(name: &str) -> Result<Option<FiniteGroup>> {
    let g = match name {
        "C4:C4" => relabel(FiniteGroup::cyclic_semidirect(4, 4, 3)?, name),
        "(C4xC2):C2" => c4c2_by_c2(name, 0, 1)?,
        "Pauli" => c4c2_by_c2(name, 2, 0)?,
        "C3:C4" => relabel(FiniteGroup::dicyclic(3)?, name),
        "C3:C8" => relabel(FiniteGroup::cyclic_semidirect(3, 8, 2)?, name),
        "C9:C3" => relabel(FiniteGroup::cyclic_semidirect(9, 3, 4)?, name),
        "C8:C4" => relabel(FiniteGroup::cyclic_semidirect(8, 4, 3)?, name),
        "C8:C4[5]" => relabel(FiniteGroup::cyclic_semidirect(8, 4, 5)?, name),
        "C8:C4[7]" => relabel(FiniteGroup::cyclic_semidirect(8, 4, 7)?, name),
        "C4:C8" => relabel(FiniteGroup::cyclic_semidirect(4, 8, 3)?, name),
        _ => {
            if let Some(rest) = name.strip_prefix("SD") {
                match rest.parse::<u64>() {
                    Ok(o) if o >= 16 && o.is_power_of_two() => {
                        relabel(FiniteGroup::cyclic_semidirect(o / 2, 2, o / 4 - 1)?, name)
                    }
                    _ => return Ok(None),
                }
            } else if let Some(rest) = name.strip_prefix('M') {
                match rest.parse::<u64>() {
                    Ok(o) if o >= 16 && o.is_power_of_two() => {
                        relabel(FiniteGroup::cyclic_semidirect(o / 2, 2, o / 4 + 1)?, name)
                    }
                    _ => return Ok(None),
                }
            } else {
                return Ok(None);
            }
        }
    };
    Ok(Some(g))
}

/// Names of the non-abelian groups of order ≤ 16, one per isomorphism class.
pub const NONABELIAN_UP_TO_16: [&str; 17] = [
    "S3", "D8", "Q8", "D10", "D12", "A4", "Dic12", "D14", "(C4xC2):C2", "C4:C4", "M16", "D16",
    "SD16", "Q16", "D8xC2", "Q8xC2", "Pauli",
];

/// One group from each isomorphism class of order ≤ `max` (at most 16).
pub fn small_groups(max: usize) -> Result<Vec<FiniteGroup>> {
    assert!(max <= 16, "the complete library stops at order 16");
    let mut out = Vec::new();
    for n in 1..=max as u64 {
        out.extend(abelian_groups(n)?);
        for name in NONABELIAN_UP_TO_16 {
            let g = FiniteGroup::named(name)?;
            if g.order() as u64 == n {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Extra non-abelian groups of order 17..=32.
pub const FAMILIES_UP_TO_32: [&str; 26] = [
    "D18", "Dic20", "D20", "S4", "D24", "Dic24", "C3:C8", "A4xC2", "D12xC2", "Heis3", "C9:C3",
    "D32", "Q32", "SD32", "M32", "D16xC2", "Q16xC2", "D8xC4", "Q8xC4", "D8xC2xC2", "Q8xC2xC2",
    "PaulixC2", "C8:C4", "C8:C4[5]", "C8:C4[7]", "C4:C8",
];

/// The library up to order `max` (≤ 32): complete to 16, abelian and families beyond.
pub fn library(max: usize) -> Result<Vec<FiniteGroup>> {
    let mut out = small_groups(max.min(16))?;
    for n in 17..=max as u64 {
        out.extend(abelian_groups(n)?);
    }
    for name in FAMILIES_UP_TO_32 {
        let g = FiniteGroup::named(name)?;
        if g.order() > 16 && g.order() <= max {
            out.push(g);
        }
    }
    Ok(out)
}
