//! Homology of one orbit block at one prime.
//!
//! The image of ∂_{k+1} splits as a free unit part U plus leftovers. On the
//! complement F, ker ∂_k|_F is read off a local Smith form of ∂_k|_F and the
//! leftovers give the relations among the kernel generators.

use super::bar::{CoeffModule, Indexer};
use super::reduce::Reducer;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{local_snf, LocalMat, Track};
use crate::modp::Zpn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// ℤ_(p) coefficients computed modulo a working power of p; `bound` caps
    /// the valuations that can occur in the boundary maps.
    Integral { bound: u32 },
    /// ℤ/pᴺ coefficients.
    Truncated,
}

pub(crate) struct BlockSolve {
    pub ring: Zpn,
    mode: Mode,
    reducer: Reducer,
    free_rows: Vec<u32>,
    v: LocalMat,
    v_inv: LocalMat,
    /// Kernel generator g is p^{shift}·V e_{col}.
    gens: Vec<(usize, u32)>,
    /// Functionals (rows over the generators) and sections of the kept factors.
    fin_u: Vec<Vec<u64>>,
    fin_sec: Vec<Vec<u64>>,
    pub exps: Vec<u32>,
}

impl BlockSolve {
    pub fn new(
        g: &FiniteGroup,
        module: CoeffModule,
        ix: &Indexer,
        k: usize,
        ring: Zpn,
        mode: Mode,
    ) -> Result<Self> {
        let nk = ix.dim(k);
        let mut reducer = Reducer::new(ring, nk);
        let (mut t, mut b, mut out) = (Vec::new(), Vec::new(), Vec::new());
        let mut col = Vec::new();
        for c in 0..ix.dim(k + 1) {
            ix.boundary(g, module, k + 1, c, &mut t, &mut b, &mut out);
            col.clear();
            col.extend(out.iter().map(|&(i, s)| (i, ring.from_i64(s))));
            reducer.add_column(&col);
        }
        let leftovers = reducer.leftover_projections();
        let free_rows = reducer.free_rows().to_vec();
        let s = free_rows.len();
        let nk1 = ix.dim(k - 1);
        let mut a = LocalMat::zeros(nk1, s);
        for (j, &f) in free_rows.iter().enumerate() {
            ix.boundary(g, module, k, f as usize, &mut t, &mut b, &mut out);
            for &(i, c) in &out {
                let v = ring.add(a.get(i as usize, j), ring.from_i64(c));
                a.set(i as usize, j, v);
            }
        }
        let snf = local_snf(&ring, &a, Track::COLS);
        let v = snf.v.clone().expect("tracked");
        let v_inv = snf.v_inv.clone().expect("tracked");
        let n = ring.n();
        let mut gens = Vec::new();
        for j in 0..s {
            let vj = snf.val_at(j, n);
            match mode {
                Mode::Integral { bound } => {
                    if vj > bound {
                        gens.push((j, 0));
                    }
                }
                Mode::Truncated => {
                    if vj > 0 {
                        gens.push((j, n - vj));
                    }
                }
            }
        }
        let mut solve = BlockSolve {
            ring,
            mode,
            reducer,
            free_rows,
            v,
            v_inv,
            gens,
            fin_u: Vec::new(),
            fin_sec: Vec::new(),
            exps: Vec::new(),
        };
        let m = solve.gens.len();
        let mut rel: Vec<Vec<u64>> = Vec::new();
        if mode == Mode::Truncated {
            for (gi, &(_, shift)) in solve.gens.iter().enumerate() {
                let mut c = vec![0; m];
                c[gi] = ring.p_pow(n - shift);
                rel.push(c);
            }
        }
        for l in &leftovers {
            rel.push(solve.gen_coords(l)?);
        }
        let rm = LocalMat::from_cols(m, &rel);
        let fin = local_snf(&ring, &rm, Track::ROWS);
        let u = fin.u.as_ref().expect("tracked");
        let ui = fin.u_inv.as_ref().expect("tracked");
        for i in 0..m {
            let e = fin.val_at(i, n);
            if e == 0 {
                continue;
            }
            if let Mode::Integral { bound } = mode {
                if e > bound {
                    return Err(Error::Verification(format!(
                        "homology in degree {k} has a non-torsion part at p = {}",
                        ring.p()
                    )));
                }
            }
            solve.exps.push(e);
            solve.fin_u.push(u.row(i).to_vec());
            solve.fin_sec.push(ui.col(i));
        }
        Ok(solve)
    }

    /// Coordinates of a projected cycle over the kernel generators.
    fn gen_coords(&self, y: &[u64]) -> Result<Vec<u64>> {
        let w = self.v_inv.mul_vec(&self.ring, y);
        self.gens
            .iter()
            .map(|&(j, shift)| {
                let x = w[j];
                if self.ring.val(x) < shift {
                    return Err(Error::NotACycle(1));
                }
                Ok(self.ring.div_p_pow(x, shift))
            })
            .collect()
    }

    /// Class coordinates of a cycle given as a sparse vector in block indices.
    pub fn coords(&self, col: &[(u32, u64)]) -> Result<Vec<u64>> {
        let y = self.reducer.project(col);
        let a = self.gen_coords(&y)?;
        let r = &self.ring;
        Ok(self
            .fin_u
            .iter()
            .zip(&self.exps)
            .map(|(row, &e)| {
                let mut c = 0;
                for (&u, &x) in row.iter().zip(&a) {
                    c = r.mul_add(c, u, x);
                }
                c % r.p().pow(e)
            })
            .collect())
    }

    /// A cycle representing factor i, as (block index, coefficient) pairs.
    pub fn representative(&self, i: usize) -> Vec<(u32, u64)> {
        let r = &self.ring;
        let s = self.free_rows.len();
        let mut y = vec![0u64; s];
        for (gi, &(j, shift)) in self.gens.iter().enumerate() {
            let a = r.mul(self.fin_sec[i][gi], r.p_pow(shift));
            if a == 0 {
                continue;
            }
            for (t, yt) in y.iter_mut().enumerate() {
                *yt = r.mul_add(*yt, a, self.v.get(t, j));
            }
        }
        self.free_rows.iter().zip(y).filter(|(_, c)| *c != 0).map(|(&f, c)| (f, c)).collect()
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.mode, Mode::Integral { .. })
    }
}
