use super::Matrix;
use num_integer::Integer;
use num_traits::Signed;
use std::fmt::Debug;

/// Exact integer scalar usable in Smith normal form.
pub trait IntScalar: Integer + Signed + Clone + Debug {}
impl<T: Integer + Signed + Clone + Debug> IntScalar for T {}

/// `u · a · v = diag(d)` with `d[i] | d[i+1]`, all nonnegative.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub diag: Vec<T>,
    pub rank: usize,
    pub u: Option<Matrix<T>>,
}

impl<T: IntScalar> Smith<T> {
    /// Invariant factors different from one, zeros included.
    pub fn nontrivial(&self) -> Vec<T> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct State<T> {
    a: Matrix<T>,
    u: Option<Matrix<T>>,
}

impl<T: IntScalar> State<T> {
    fn row_axpy(&mut self, dst: usize, src: usize, f: &T) {
        for j in 0..self.a.cols() {
            let v = self.a.get(dst, j).clone() - f.clone() * self.a.get(src, j).clone();
            self.a.set(dst, j, v);
        }
        if let Some(u) = self.u.as_mut() {
            for j in 0..u.cols() {
                let v = u.get(dst, j).clone() - f.clone() * u.get(src, j).clone();
                u.set(dst, j, v);
            }
        }
    }
    fn col_axpy(&mut self, dst: usize, src: usize, f: &T) {
        for i in 0..self.a.rows() {
            let v = self.a.get(i, dst).clone() - f.clone() * self.a.get(i, src).clone();
            self.a.set(i, dst, v);
        }
    }
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(x, y);
        }
    }
    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols() {
            let v = -self.a.get(i, j).clone();
            self.a.set(i, j, v);
        }
        if let Some(u) = self.u.as_mut() {
            for j in 0..u.cols() {
                let v = -u.get(i, j).clone();
                u.set(i, j, v);
            }
        }
    }
}

/// Smith normal form by minimal-absolute-value pivoting.
pub fn smith<T: IntScalar>(a: &Matrix<T>, track_u: bool) -> Smith<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut st = State {
        a: a.clone(),
        u: track_u.then(|| Matrix::identity(m)),
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = st.a.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < st.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        st.swap_rows(t, bi);
        st.a.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if st.a.get(i, t).is_zero() {
                    continue;
                }
                let q = st.a.get(i, t).div_floor(st.a.get(t, t));
                st.row_axpy(i, t, &q);
                if !st.a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if st.a.get(t, j).is_zero() {
                    continue;
                }
                let q = st.a.get(t, j).div_floor(st.a.get(t, t));
                st.col_axpy(j, t, &q);
                if !st.a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let piv = st.a.get(t, t).clone();
                let bad = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| !st.a.get(i, j).is_multiple_of(&piv)));
                match bad {
                    Some(i) => {
                        let neg_one = -T::one();
                        st.row_axpy(t, i, &neg_one);
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut bi = t;
            let mut bj = t;
            let mut bv = st.a.get(t, t).abs();
            for i in t + 1..m {
                let x = st.a.get(i, t);
                if !x.is_zero() && (bv.is_zero() || x.abs() < bv) {
                    bv = x.abs();
                    bi = i;
                    bj = t;
                }
            }
            for j in t + 1..n {
                let x = st.a.get(t, j);
                if !x.is_zero() && (bv.is_zero() || x.abs() < bv) {
                    bv = x.abs();
                    bi = t;
                    bj = j;
                }
            }
            st.swap_rows(t, bi);
            st.a.swap_cols(t, bj);
        }
        if st.a.get(t, t).is_negative() {
            st.negate_row(t);
        }
        t += 1;
    }
    let k = m.min(n);
    let diag: Vec<T> = (0..k).map(|i| st.a.get(i, i).clone()).collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Smith { diag, rank, u: st.u }
}
