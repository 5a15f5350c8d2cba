//! Column-by-column elimination of a boundary image with unit pivots.
//!
//! Columns with a unit entry become pivots of a fully reduced echelon basis
//! of a free direct summand U of the image. Columns that reduce to nonzero
//! vectors with no unit entry are kept as leftovers. At the end the ambient
//! module splits as U ⊕ F with F spanned by the non-pivot coordinates.

use crate::linalg::{local_snf, LocalMat, Track};
use crate::modp::Zpn;

const NONE: u32 = u32::MAX;

pub(crate) struct Reducer {
    r: Zpn,
    n: usize,
    piv_row: Vec<u32>,
    piv_vec: Vec<u64>,
    row_piv: Vec<u32>,
    nonpivot: Vec<u32>,
    leftovers: Vec<Vec<(u32, u64)>>,
    work: Vec<u64>,
    touched: Vec<u32>,
}

impl Reducer {
    pub fn new(r: Zpn, n: usize) -> Self {
        Reducer {
            r,
            n,
            piv_row: Vec::new(),
            piv_vec: Vec::new(),
            row_piv: vec![NONE; n],
            nonpivot: (0..n as u32).collect(),
            leftovers: Vec::new(),
            work: vec![0; n],
            touched: Vec::new(),
        }
    }

    /// Reduces `col` into `work`; the result is supported on non-pivot rows.
    fn reduce_into(&self, work: &mut [u64], touched: &mut Vec<u32>, col: &[(u32, u64)]) {
        let r = self.r;
        for &(i, v) in col {
            let w = &mut work[i as usize];
            if *w == 0 {
                touched.push(i);
            }
            *w = r.add(*w, v);
        }
        let n = self.n;
        for &row in touched.iter() {
            let pid = self.row_piv[row as usize];
            if pid == NONE {
                continue;
            }
            let c = work[row as usize];
            if c == 0 {
                continue;
            }
            work[row as usize] = 0;
            let f = r.neg(c);
            let base = pid as usize * n;
            for &j in &self.nonpivot {
                let b = self.piv_vec[base + j as usize];
                if b != 0 {
                    let w = &mut work[j as usize];
                    *w = r.mul_add(*w, f, b);
                }
            }
        }
    }

    fn reduce_into_work(&mut self, col: &[(u32, u64)]) {
        let mut work = std::mem::take(&mut self.work);
        let mut touched = std::mem::take(&mut self.touched);
        self.reduce_into(&mut work, &mut touched, col);
        self.work = work;
        self.touched = touched;
    }

    fn clear_work(&mut self) {
        for &i in &self.touched {
            self.work[i as usize] = 0;
        }
        self.touched.clear();
        for &j in &self.nonpivot {
            self.work[j as usize] = 0;
        }
    }

    pub fn add_column(&mut self, col: &[(u32, u64)]) {
        self.reduce_into_work(col);
        let r = self.r;
        let unit = self.nonpivot.iter().copied().find(|&j| r.is_unit(self.work[j as usize]));
        match unit {
            Some(rho) => {
                let inv = r.inv(self.work[rho as usize]).expect("unit");
                let n = self.n;
                let pid = self.piv_row.len() as u32;
                self.nonpivot.retain(|&j| j != rho);
                let mut v = vec![0u64; n];
                v[rho as usize] = 1;
                let mut support = Vec::new();
                for &j in &self.nonpivot {
                    let x = self.work[j as usize];
                    if x != 0 {
                        let y = r.mul(x, inv);
                        v[j as usize] = y;
                        support.push((j, y));
                    }
                }
                // eliminate the new pivot row from the existing pivots
                for q in 0..self.piv_row.len() {
                    let base = q * n;
                    let c = self.piv_vec[base + rho as usize];
                    if c == 0 {
                        continue;
                    }
                    self.piv_vec[base + rho as usize] = 0;
                    let f = r.neg(c);
                    for &(j, y) in &support {
                        let b = &mut self.piv_vec[base + j as usize];
                        *b = r.mul_add(*b, f, y);
                    }
                }
                self.piv_row.push(rho);
                self.piv_vec.extend_from_slice(&v);
                self.row_piv[rho as usize] = pid;
                self.work[rho as usize] = 0;
            }
            None => {
                let left: Vec<(u32, u64)> = self
                    .nonpivot
                    .iter()
                    .filter_map(|&j| {
                        let x = self.work[j as usize];
                        (x != 0).then_some((j, x))
                    })
                    .collect();
                if !left.is_empty() {
                    self.leftovers.push(left);
                }
            }
        }
        self.clear_work();
        if self.leftovers.len() > 2 * self.nonpivot.len() + 64 {
            self.compact();
        }
    }

    /// Replaces the leftovers by an echelon generating set of their span.
    fn compact(&mut self) {
        let left = std::mem::take(&mut self.leftovers);
        let rows: Vec<Vec<u64>> = left.iter().map(|l| self.project_sparse(l)).collect();
        let s = self.nonpivot.len();
        if s == 0 || rows.is_empty() {
            return;
        }
        let m = LocalMat::from_cols(s, &rows);
        // column echelon via Smith form: the span of the columns is U⁻¹·diag
        let snf = local_snf(&self.r, &m, Track { u: false, u_inv: true, v: false, v_inv: false });
        let ui = snf.u_inv.expect("tracked");
        for i in 0..snf.rank {
            let scale = self.r.p_pow(snf.vals[i]);
            let col: Vec<(u32, u64)> = (0..s)
                .filter_map(|k| {
                    let x = self.r.mul(ui.get(k, i), scale);
                    (x != 0).then_some((self.nonpivot[k], x))
                })
                .collect();
            if !col.is_empty() {
                self.leftovers.push(col);
            }
        }
    }

    fn project_sparse(&mut self, col: &[(u32, u64)]) -> Vec<u64> {
        self.reduce_into_work(col);
        let out: Vec<u64> = self.nonpivot.iter().map(|&j| self.work[j as usize]).collect();
        self.clear_work();
        out
    }

    /// Image of a sparse vector in the non-pivot coordinates, in `free_rows` order.
    pub fn project(&self, col: &[(u32, u64)]) -> Vec<u64> {
        let mut work = vec![0u64; self.n];
        let mut touched = Vec::new();
        self.reduce_into(&mut work, &mut touched, col);
        self.nonpivot.iter().map(|&j| work[j as usize]).collect()
    }

    /// Non-pivot coordinates (the complement F).
    pub fn free_rows(&self) -> &[u32] {
        &self.nonpivot
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.piv_row.len()
    }

    /// Final leftovers projected to F.
    pub fn leftover_projections(&mut self) -> Vec<Vec<u64>> {
        self.compact();
        let left = std::mem::take(&mut self.leftovers);
        let out = left.iter().map(|l| self.project_sparse(l)).collect();
        self.leftovers = left;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_unit_part() {
        let r = Zpn::new(2, 6).unwrap();
        let mut red = Reducer::new(r, 3);
        red.add_column(&[(0, 1), (1, 1)]);
        red.add_column(&[(1, 2), (2, 2)]);
        red.add_column(&[(0, 2), (2, 2)]);
        assert_eq!(red.rank(), 1);
        let left = red.leftover_projections();
        // the quotient by the unit column lives on rows 1 and 2
        assert_eq!(red.free_rows(), &[1, 2]);
        assert!(left.iter().all(|v| v.iter().all(|&x| x % 2 == 0)));
    }
}
