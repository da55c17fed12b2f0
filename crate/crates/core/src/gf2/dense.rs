use super::SparseMatrix;

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    nrows: usize,
    ncols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        let words = ncols.div_ceil(64);
        BitMatrix {
            nrows,
            ncols,
            words,
            data: vec![0; nrows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Dense copy of `phi(M)`.
    pub fn from_sparse(m: &SparseMatrix) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for &(j, v) in m.row(i) {
                if v % 2 == 1 {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if bit {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * w);
            (&lo[src * w..(src + 1) * w], &mut hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * w);
            (&hi[..w] as &[u64], &mut lo[dst * w..(dst + 1) * w])
        };
        for (d, s) in b.iter_mut().zip(a) {
            *d ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for k in 0..w {
            self.data.swap(a * w + k, b * w + k);
        }
    }

    /// Rank by forward elimination (consumes a copy).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.ncols {
            if rank == m.nrows {
                break;
            }
            let Some(pivot) = (rank..m.nrows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            for r in rank + 1..m.nrows {
                if m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        assert_eq!(self.nrows, self.ncols, "inverse of a non-square matrix");
        let n = self.nrows;
        let mut a = self.clone();
        let mut inv = BitMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            for r in 0..n {
                if r != col && a.get(r, col) {
                    a.xor_row_into(col, r);
                    inv.xor_row_into(col, r);
                }
            }
        }
        Some(inv)
    }

    /// `self * x` for a bit-packed vector `x` of length `ncols`.
    pub fn mul_packed(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.nrows.div_ceil(64)];
        for i in 0..self.nrows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(x)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = BitMatrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                if self.get(i, k) {
                    let w = out.words;
                    let src = other.row_words(k).to_vec();
                    for (d, s) in out.data[i * w..(i + 1) * w].iter_mut().zip(&src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }
}

/// Rank of `M` reduced modulo two.
pub fn gf2_rank(m: &SparseMatrix) -> usize {
    BitMatrix::from_sparse(m).rank()
}
