use super::{CosetSolver, LatticeSpec};
use crate::error::{Error, Result};
use crate::gf2::SparseMatrix;

/// Reduced row echelon form of `[phi(H) | I]`, enough to solve
/// `phi(H) c = s` for any `s` with the free positions of `c` given.
#[derive(Clone, Debug)]
struct Echelon {
    n: usize,
    m: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

fn bit(row: &[u64], j: usize) -> bool {
    (row[j / 64] >> (j % 64)) & 1 == 1
}

impl Echelon {
    fn new(h: &SparseMatrix) -> Self {
        let (m, n) = (h.nrows(), h.ncols());
        let words = (n + m).div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut r = vec![0u64; words];
                for &(j, v) in h.row(i) {
                    if v % 2 == 1 {
                        r[j / 64] |= 1 << (j % 64);
                    }
                }
                r[(n + i) / 64] |= 1 << ((n + i) % 64);
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..m).find(|&r| bit(&rows[r], col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && bit(row, col) {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        Echelon {
            n,
            m,
            rows,
            pivots,
            free,
        }
    }

    // parity of (transform row r) . s
    fn transformed(&self, r: usize, s: &[u8]) -> u8 {
        (0..self.m).fold(0, |acc, i| acc ^ (bit(&self.rows[r], self.n + i) as u8 & s[i]))
    }

    fn solve(&self, u: &[u8], s: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.free.len() || s.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "expected {} message bits and {} syndrome bits",
                self.free.len(),
                self.m
            )));
        }
        let mut c = vec![0u8; self.n];
        for (&f, &b) in self.free.iter().zip(u) {
            c[f] = b & 1;
        }
        for r in self.pivots.len()..self.m {
            if self.transformed(r, s) != 0 {
                return Err(Error::Infeasible("syndrome outside the column space".into()));
            }
        }
        for (r, &p) in self.pivots.iter().enumerate() {
            let mut v = self.transformed(r, s);
            for &f in &self.free {
                if bit(&self.rows[r], f) {
                    v ^= c[f];
                }
            }
            c[p] = v;
        }
        Ok(c)
    }
}

/// Coset solver by Gaussian elimination. The message fills the non-pivot
/// positions, so every member of every coset is reachable. Quadratic in the
/// block length; intended for small codes and as a reference.
#[derive(Clone, Debug)]
pub struct GaussSolver {
    levels: Vec<Echelon>,
}

impl GaussSolver {
    pub fn new(spec: &LatticeSpec) -> Self {
        GaussSolver {
            levels: (0..spec.levels()).map(|l| Echelon::new(spec.h(l))).collect(),
        }
    }

    /// Positions of `c_l` taken verbatim from the message.
    pub fn free_positions(&self, level: usize) -> &[usize] {
        &self.levels[level].free
    }
}

impl CosetSolver for GaussSolver {
    fn solve(&self, level: usize, u: &[u8], s: &[u8]) -> Result<Vec<u8>> {
        self.levels[level].solve(u, s)
    }
}
