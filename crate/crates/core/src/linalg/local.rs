use crate::modp::Zpn;

/// Dense row-major matrix over ℤ/pᴺ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl LocalMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LocalMat { rows, cols, data: vec![0; rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn from_cols(rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }
    pub fn mul_vec(&self, r: &Zpn, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc: u128 = 0;
                for (a, b) in row.iter().zip(x) {
                    acc = (acc + *a as u128 * *b as u128) % r.modulus() as u128;
                }
                acc as u64
            })
            .collect()
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
    /// row[dst] += f·row[src]
    fn row_axpy(&mut self, r: &Zpn, dst: usize, src: usize, f: u64, from: usize) {
        if f == 0 {
            return;
        }
        for j in from..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + j];
                *d = r.mul_add(*d, f, s);
            }
        }
    }
    /// col[dst] += f·col[src]
    fn col_axpy(&mut self, r: &Zpn, dst: usize, src: usize, f: u64) {
        if f == 0 {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let d = &mut self.data[i * self.cols + dst];
                *d = r.mul_add(*d, f, s);
            }
        }
    }
    fn scale_row(&mut self, r: &Zpn, i: usize, f: u64) {
        for j in 0..self.cols {
            let d = &mut self.data[i * self.cols + j];
            *d = r.mul(*d, f);
        }
    }
    fn scale_col(&mut self, r: &Zpn, j: usize, f: u64) {
        for i in 0..self.rows {
            let d = &mut self.data[i * self.cols + j];
            *d = r.mul(*d, f);
        }
    }
}

/// Which transforms to record.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const NONE: Track = Track { u: false, u_inv: false, v: false, v_inv: false };
    pub const ROWS: Track = Track { u: true, u_inv: true, v: false, v_inv: false };
    pub const COLS: Track = Track { u: false, u_inv: false, v: true, v_inv: true };
    pub const ALL: Track = Track { u: true, u_inv: true, v: true, v_inv: true };
}

/// `u · a · v = diag(p^vals)` over ℤ/pᴺ, valuations nondecreasing,
/// with valuation N standing for a zero diagonal entry.
#[derive(Clone, Debug)]
pub struct LocalSnf {
    pub vals: Vec<u32>,
    pub rank: usize,
    pub u: Option<LocalMat>,
    pub u_inv: Option<LocalMat>,
    pub v: Option<LocalMat>,
    pub v_inv: Option<LocalMat>,
}

impl LocalSnf {
    /// Valuation of the i-th diagonal entry, N beyond the square part.
    pub fn val_at(&self, i: usize, n: u32) -> u32 {
        self.vals.get(i).copied().unwrap_or(n)
    }
}

/// Smith normal form over ℤ/pᴺ with minimal-valuation pivots.
pub fn local_snf(r: &Zpn, a: &LocalMat, track: Track) -> LocalSnf {
    let (m, n) = (a.rows, a.cols);
    let mut a = a.clone();
    let mut u = track.u.then(|| LocalMat::identity(m));
    let mut u_inv = track.u_inv.then(|| LocalMat::identity(m));
    let mut v = track.v.then(|| LocalMat::identity(n));
    let mut v_inv = track.v_inv.then(|| LocalMat::identity(n));
    let big_n = r.n();
    let mut vals = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for i in t..m {
            for j in t..n {
                let x = a.get(i, j);
                if x == 0 {
                    continue;
                }
                let vx = r.val(x);
                if best.map_or(true, |b| vx < b.2) {
                    best = Some((i, j, vx));
                    if vx == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((bi, bj, bv)) = best else { break };
        if bi != t {
            a.swap_rows(t, bi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, bi);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.swap_cols(t, bi);
            }
        }
        if bj != t {
            a.swap_cols(t, bj);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, bj);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.swap_rows(t, bj);
            }
        }
        // normalize the pivot to exactly p^bv
        let (_, unit) = r.split(a.get(t, t));
        let ui = r.inv(unit).expect("unit part");
        if ui != 1 {
            a.scale_row(r, t, ui);
            if let Some(u) = u.as_mut() {
                u.scale_row(r, t, ui);
            }
            if let Some(uinv) = u_inv.as_mut() {
                uinv.scale_col(r, t, unit);
            }
        }
        let pv = bv;
        for i in t + 1..m {
            let x = a.get(i, t);
            if x == 0 {
                continue;
            }
            let f = r.neg(r.div_p_pow(x, pv));
            a.row_axpy(r, i, t, f, t);
            if let Some(u) = u.as_mut() {
                u.row_axpy(r, i, t, f, 0);
            }
            if let Some(uinv) = u_inv.as_mut() {
                uinv.col_axpy(r, t, i, r.neg(f));
            }
        }
        for j in t + 1..n {
            let x = a.get(t, j);
            if x == 0 {
                continue;
            }
            let f = r.neg(r.div_p_pow(x, pv));
            a.set(t, j, 0);
            if let Some(v) = v.as_mut() {
                v.col_axpy(r, j, t, f);
            }
            if let Some(vinv) = v_inv.as_mut() {
                vinv.row_axpy(r, t, j, r.neg(f), 0);
            }
        }
        vals.push(pv);
    }
    let rank = vals.len();
    while vals.len() < m.min(n) {
        vals.push(big_n);
    }
    LocalSnf { vals, rank, u, u_inv, v, v_inv }
}

/// Solves a·x ≡ b over ℤ/pᴺ. On failure returns the residual b − a·x of the
/// best partial solution.
pub fn solve(r: &Zpn, a: &LocalMat, b: &[u64]) -> std::result::Result<Vec<u64>, Vec<u64>> {
    assert_eq!(b.len(), a.rows);
    let snf = local_snf(r, a, Track { u: true, u_inv: false, v: true, v_inv: false });
    let u = snf.u.as_ref().expect("tracked");
    let v = snf.v.as_ref().expect("tracked");
    let y = u.mul_vec(r, b);
    let mut z = vec![0u64; a.cols];
    let mut ok = true;
    for (i, &yi) in y.iter().enumerate() {
        let vi = snf.val_at(i, r.n());
        if i >= a.cols || vi >= r.n() {
            ok &= yi == 0;
            continue;
        }
        if r.val(yi) < vi {
            ok = false;
            continue;
        }
        z[i] = r.div_p_pow(yi, vi);
    }
    let x = v.mul_vec(r, &z);
    if ok {
        Ok(x)
    } else {
        let ax = a.mul_vec(r, &x);
        Err(b.iter().zip(&ax).map(|(&bi, &ci)| r.sub(bi, ci)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(r: &Zpn, a: &LocalMat, b: &LocalMat) -> LocalMat {
        let mut out = LocalMat::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                for j in 0..b.cols {
                    let v = r.mul_add(out.get(i, j), a.get(i, k), b.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let r = Zpn::new(3, 4).unwrap();
        let a = LocalMat::from_cols(3, &[vec![3, 0, 0], vec![1, 9, 0]]);
        let x = solve(&r, &a, &[4, 9, 0]).unwrap();
        assert_eq!(a.mul_vec(&r, &x), vec![4, 9, 0]);
        let res = solve(&r, &a, &[0, 1, 0]).unwrap_err();
        assert!(res.iter().any(|&c| c != 0));
        assert!(solve(&r, &a, &[0, 0, 1]).is_err());
    }

    #[test]
    fn transforms_are_consistent() {
        let r = Zpn::new(3, 5).unwrap();
        let mut a = LocalMat::zeros(4, 5);
        let entries = [3u64, 9, 6, 0, 27, 1, 2, 0, 18, 4, 81, 5, 7, 3, 12, 0, 0, 9, 27, 6];
        a.data.copy_from_slice(&entries);
        let s = local_snf(&r, &a, Track::ALL);
        let (u, ui, v, vi) = (s.u.unwrap(), s.u_inv.unwrap(), s.v.unwrap(), s.v_inv.unwrap());
        assert_eq!(mat_mul(&r, &u, &ui), LocalMat::identity(4));
        assert_eq!(mat_mul(&r, &v, &vi), LocalMat::identity(5));
        let d = mat_mul(&r, &mat_mul(&r, &u, &a), &v);
        for i in 0..4 {
            for j in 0..5 {
                let expect = if i == j && s.vals[i] < 5 { 3u64.pow(s.vals[i]) } else { 0 };
                assert_eq!(d.get(i, j), expect, "entry {i},{j}");
            }
        }
        assert!(s.vals.windows(2).all(|w| w[0] <= w[1]));
    }
}
