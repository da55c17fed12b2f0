use std::fmt;

use crate::error::{Error, Result};

/// Sparse matrix with small nonnegative integer entries.
///
/// Rows and columns are both indexed so the matrix doubles as a Tanner graph.
/// Only nonzero entries are stored. The `modulus` tag records the ring the
/// entries live in: `Some(2)` for binary parity-check matrices, `Some(2^l)`
/// for lifted matrices and `None` for unreduced integer matrices such as the
/// coupling matrices of the generalized construction.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    modulus: Option<u64>,
    // (column, value), sorted by column
    rows: Vec<Vec<(usize, u64)>>,
    // row indices, sorted
    cols: Vec<Vec<usize>>,
}

impl SparseMatrix {
    /// Empty binary matrix.
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self::with_modulus(nrows, ncols, Some(2))
    }

    pub fn with_modulus(nrows: usize, ncols: usize, modulus: Option<u64>) -> Self {
        if let Some(q) = modulus {
            assert!(q >= 2, "modulus must be at least 2");
        }
        SparseMatrix {
            nrows,
            ncols,
            modulus,
            rows: vec![Vec::new(); nrows],
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.insert(i, i);
        }
        m
    }

    /// Builds a matrix from dense rows, reducing every entry by the modulus.
    pub fn from_dense(dense: &[Vec<u64>], modulus: Option<u64>) -> Result<Self> {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, |r| r.len());
        let mut m = Self::with_modulus(nrows, ncols, modulus);
        for (i, row) in dense.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Binary matrix from per-row column supports.
    pub fn from_row_supports(ncols: usize, supports: &[Vec<usize>]) -> Self {
        let mut m = Self::new(supports.len(), ncols);
        for (i, s) in supports.iter().enumerate() {
            for &j in s {
                m.insert(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// True when every stored entry equals one.
    pub fn is_binary(&self) -> bool {
        self.rows.iter().flatten().all(|&(_, v)| v == 1)
    }

    fn reduce(&self, v: u64) -> u64 {
        match self.modulus {
            Some(q) => v % q,
            None => v,
        }
    }

    /// Sets entry `(i, j)` to `value` reduced by the modulus; zero removes it.
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        assert!(i < self.nrows && j < self.ncols, "index ({i}, {j}) out of range");
        let value = self.reduce(value);
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => {
                if value == 0 {
                    row.remove(pos);
                    let col = &mut self.cols[j];
                    let cpos = col.binary_search(&i).expect("row/column supports out of sync");
                    col.remove(cpos);
                } else {
                    row[pos].1 = value;
                }
            }
            Err(pos) => {
                if value != 0 {
                    row.insert(pos, (j, value));
                    let col = &mut self.cols[j];
                    let cpos = col.binary_search(&i).unwrap_err();
                    col.insert(cpos, i);
                }
            }
        }
    }

    /// Sets entry `(i, j)` to one.
    pub fn insert(&mut self, i: usize, j: usize) {
        self.set(i, j, 1);
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        let row = &self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => row[pos].1,
            Err(_) => 0,
        }
    }

    /// Stored entries of row `i` as `(column, value)` pairs.
    pub fn row(&self, i: usize) -> &[(usize, u64)] {
        &self.rows[i]
    }

    /// Column indices `J_i` of the nonzero entries of row `i`.
    pub fn row_support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter().map(|&(j, _)| j)
    }

    /// Row indices `I_j` of the nonzero entries of column `j`.
    pub fn col_support(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.rows[i].len()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        self.cols[j].len()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        self.cols.iter().map(Vec::len).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Reduction modulo two, `phi(M)`: keeps the odd entries with value one.
    pub fn binary_view(&self) -> SparseMatrix {
        if self.modulus == Some(2) {
            return self.clone();
        }
        let mut out = SparseMatrix::new(self.nrows, self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if v % 2 == 1 {
                    out.insert(i, j);
                }
            }
        }
        out
    }

    /// Same entries under a different modulus tag (entries are re-reduced).
    pub fn with_modulus_tag(&self, modulus: Option<u64>) -> SparseMatrix {
        let mut out = SparseMatrix::with_modulus(self.nrows, self.ncols, modulus);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::with_modulus(self.ncols, self.nrows, self.modulus);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.rows[j].push((i, v));
                out.cols[i].push(j);
            }
        }
        out
    }

    /// Applies row and column permutations: entry `(i, j)` moves to
    /// `(row_perm[i], col_perm[j])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        assert_eq!(row_perm.len(), self.nrows);
        assert_eq!(col_perm.len(), self.ncols);
        let mut out = SparseMatrix::with_modulus(self.nrows, self.ncols, self.modulus);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.rows[row_perm[i]].push((col_perm[j], v));
                out.cols[col_perm[j]].push(row_perm[i]);
            }
        }
        out.rows.iter_mut().for_each(|r| r.sort_unstable());
        out.cols.iter_mut().for_each(|c| c.sort_unstable());
        out
    }

    /// Left-right and up-down flip (reverses both row and column order).
    pub fn flip(&self) -> SparseMatrix {
        let rp: Vec<usize> = (0..self.nrows).rev().collect();
        let cp: Vec<usize> = (0..self.ncols).rev().collect();
        self.permute(&rp, &cp)
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0u64; self.ncols]; self.nrows];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    /// Exact integer product `M v^T`.
    pub fn mul_int(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| a as i64 * v[j]).sum())
            .collect()
    }

    /// Product `phi(M) v^T` over GF(2); `v` holds bits as 0/1 bytes.
    pub fn mul_gf2(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|&&(_, a)| a % 2 == 1)
                    .fold(0u8, |acc, &(j, _)| acc ^ (v[j] & 1))
            })
            .collect()
    }

    /// Stacks `[I_m | M]`, the parity-check matrix of the lengthened code.
    pub fn prepend_identity(&self) -> SparseMatrix {
        let m = self.nrows;
        let bin = self.binary_view();
        let mut out = SparseMatrix::new(m, m + self.ncols);
        for i in 0..m {
            out.rows[i].push((i, 1));
            out.cols[i].push(i);
            for &(j, _) in &bin.rows[i] {
                out.rows[i].push((m + j, 1));
                out.cols[m + j].push(i);
            }
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn check_invariants(&self) -> bool {
        let mut count = 0;
        for (i, row) in self.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return false;
            }
            for &(j, v) in row {
                if v == 0 || self.cols[j].binary_search(&i).is_err() {
                    return false;
                }
                if let Some(q) = self.modulus {
                    if v >= q {
                        return false;
                    }
                }
                count += 1;
            }
        }
        count == self.cols.iter().map(Vec::len).sum::<usize>()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SparseMatrix({}x{}, nnz={}, modulus={:?})",
            self.nrows,
            self.ncols,
            self.nnz(),
            self.modulus
        )?;
        if self.nrows <= 16 && self.ncols <= 32 {
            for row in self.to_dense() {
                write!(f, "\n  ")?;
                for v in row {
                    write!(f, "{v} ")?;
                }
            }
        }
        Ok(())
    }
}

/// Integer product `F H` with entries reduced into `[0, modulus)`.
///
/// `modulus = None` keeps the exact integer product.
pub fn int_matmul_mod(
    f: &SparseMatrix,
    h: &SparseMatrix,
    modulus: Option<u64>,
) -> Result<SparseMatrix> {
    if f.ncols() != h.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "F is {}x{} but H has {} rows",
            f.nrows(),
            f.ncols(),
            h.nrows()
        )));
    }
    if let Some(q) = modulus {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "modulus {q} is not a power of two >= 2"
            )));
        }
    }
    let mut out = SparseMatrix::with_modulus(f.nrows(), h.ncols(), modulus);
    let mut acc = vec![0u64; h.ncols()];
    let mut touched = Vec::new();
    for i in 0..f.nrows() {
        for &(k, a) in f.row(i) {
            for &(j, b) in h.row(k) {
                if acc[j] == 0 {
                    touched.push(j);
                }
                let prod = a.wrapping_mul(b);
                acc[j] = match modulus {
                    // wrapping arithmetic is exact modulo any power of two <= 2^64
                    Some(_) => acc[j].wrapping_add(prod),
                    None => acc[j]
                        .checked_add(prod)
                        .expect("integer product overflow"),
                };
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for &j in &touched {
            out.set(i, j, acc[j]);
            acc[j] = 0;
        }
        touched.clear();
    }
    Ok(out)
}
