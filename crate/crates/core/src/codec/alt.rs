//! Systematic coset encoding through an approximate lower triangular
//! decomposition.
//!
//! Rows split into triangular rows and `g` gap rows, columns into message,
//! gap and triangular columns:
//!
//! ```text
//!          u   p1  p2
//! tri  [   A   B   T  ]      T lower triangular, unit diagonal
//! gap  [   C   D   E  ]
//! ```
//!
//! Given `u` and a syndrome `s`, `p1 = phi^{-1} (s_gap + C u + E T^{-1}(s_top + A u))`
//! with `phi = D + E T^{-1} B`, then `p2 = T^{-1}(s_top + A u + B p1)`. Apart
//! from the dense `g x g` product everything is a sparse pass, so the cost is
//! linear in `n` for a bounded gap.

use crate::design::is_alt_form;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, SparseMatrix};
use crate::lattice::{CosetSolver, LatticeSpec};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct AltEncoder {
    h: SparseMatrix,
    tri_rows: Vec<usize>,
    tri_cols: Vec<usize>,
    gap_rows: Vec<usize>,
    gap_cols: Vec<usize>,
    info_cols: Vec<usize>,
    // triangular index of each column, NONE elsewhere
    tri_pos: Vec<usize>,
    phi_inv: BitMatrix,
}

struct Triangle {
    rows: Vec<usize>,
    cols: Vec<usize>,
    preferred_gap_cols: Vec<usize>,
}

// The layout of a matrix already in ALT form with the given gap.
fn from_hint(h: &SparseMatrix, gap: usize) -> Option<Triangle> {
    if !is_alt_form(h, gap) {
        return None;
    }
    let (m, n) = (h.nrows(), h.ncols());
    Some(Triangle {
        rows: (0..m - gap).collect(),
        cols: (n - m + gap..n).collect(),
        preferred_gap_cols: (n - m..n - m + gap).collect(),
    })
}

// Single greedy pass: a column joins the triangle when it has no entry in
// a row already claimed; its first free row becomes the next pivot.
fn greedy(h: &SparseMatrix) -> Triangle {
    let (m, n) = (h.nrows(), h.ncols());
    let mut order: Vec<usize> = (0..n).filter(|&j| h.col_weight(j) > 0).collect();
    order.sort_by_key(|&j| (h.col_weight(j), std::cmp::Reverse(j)));
    let mut used = vec![false; m];
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    for j in order {
        if h.col_support(j).iter().any(|&r| used[r]) {
            continue;
        }
        let r = h.col_support(j)[0];
        used[r] = true;
        rows.push(r);
        cols.push(j);
        if rows.len() == m {
            break;
        }
    }
    Triangle {
        rows,
        cols,
        preferred_gap_cols: Vec::new(),
    }
}

impl AltEncoder {
    /// Builds an encoder for `phi(h)`. With a gap hint the ALT layout is
    /// used directly; otherwise (or if the hint does not fit) a greedy
    /// triangulation is tried, whose gap may be large but still gives a
    /// correct encoder.
    pub fn new(h: &SparseMatrix, gap_hint: Option<usize>) -> Result<Self> {
        let h = h.binary_view();
        let (m, n) = (h.nrows(), h.ncols());
        if m > n {
            return Err(Error::DimensionMismatch(format!("{m} checks for {n} variables")));
        }
        let tri = match gap_hint.and_then(|g| from_hint(&h, g)) {
            Some(t) => t,
            None => {
                if let Some(g) = gap_hint {
                    log::warn!("matrix is not in ALT form with gap {g}; triangulating greedily");
                }
                greedy(&h)
            }
        };
        let t_len = tri.rows.len();
        let g = m - t_len;
        let words = g.div_ceil(64).max(1);

        let mut tri_pos = vec![NONE; n];
        for (t, &c) in tri.cols.iter().enumerate() {
            tri_pos[c] = t;
        }
        let mut tri_row_pos = vec![NONE; m];
        for (t, &r) in tri.rows.iter().enumerate() {
            tri_row_pos[r] = t;
        }
        let gap_rows: Vec<usize> = (0..m).filter(|&r| tri_row_pos[r] == NONE).collect();
        let mut gap_pos = vec![NONE; m];
        for (k, &r) in gap_rows.iter().enumerate() {
            gap_pos[r] = k;
        }

        // Z = E T^{-1}: column t satisfies Z_t = E_t + sum_{t' > t} Z_{t'} T[t'][t]
        let mut z = vec![vec![0u64; words]; t_len];
        for t in (0..t_len).rev() {
            let col = tri.cols[t];
            let mut acc = vec![0u64; words];
            for &r in h.col_support(col) {
                if gap_pos[r] != NONE {
                    let k = gap_pos[r];
                    acc[k / 64] ^= 1 << (k % 64);
                }
            }
            for &r in h.col_support(col) {
                let tp = tri_row_pos[r];
                if tp != NONE && tp > t {
                    for (a, b) in acc.iter_mut().zip(&z[tp]) {
                        *a ^= b;
                    }
                }
            }
            z[t] = acc;
        }

        let project = |c: usize| -> Vec<u64> {
            let mut v = vec![0u64; words];
            for &r in h.col_support(c) {
                if gap_pos[r] != NONE {
                    let k = gap_pos[r];
                    v[k / 64] ^= 1 << (k % 64);
                } else {
                    for (a, b) in v.iter_mut().zip(&z[tri_row_pos[r]]) {
                        *a ^= b;
                    }
                }
            }
            v
        };

        // pick g columns with independent projections
        let mut candidates = tri.preferred_gap_cols.clone();
        let mut seen = vec![false; n];
        candidates.iter().for_each(|&c| seen[c] = true);
        candidates.extend((0..n).rev().filter(|&c| tri_pos[c] == NONE && !seen[c]));
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot bit, reduced vector)
        let mut gap_cols = Vec::with_capacity(g);
        let mut projections = Vec::with_capacity(g);
        for c in candidates {
            if gap_cols.len() == g {
                break;
            }
            let p = project(c);
            let mut red = p.clone();
            for (bitpos, b) in &basis {
                if (red[bitpos / 64] >> (bitpos % 64)) & 1 == 1 {
                    red.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
                }
            }
            if let Some(bitpos) = first_bit(&red) {
                basis.push((bitpos, red));
                gap_cols.push(c);
                projections.push(p);
            }
        }
        if gap_cols.len() < g {
            return Err(Error::RankDeficient {
                expected: m,
                actual: t_len + gap_cols.len(),
                attempts: 1,
            });
        }
        let mut phi = BitMatrix::zeros(g, g);
        for (j, p) in projections.iter().enumerate() {
            for i in 0..g {
                if (p[i / 64] >> (i % 64)) & 1 == 1 {
                    phi.set(i, j, true);
                }
            }
        }
        let phi_inv = phi.inverse().expect("independent projections");
        let mut is_parity = vec![false; n];
        tri.cols.iter().chain(&gap_cols).for_each(|&c| is_parity[c] = true);
        let info_cols = (0..n).filter(|&c| !is_parity[c]).collect();
        if g > 64 {
            log::warn!("encoder gap {g} is large; encoding cost grows with g^2");
        }
        Ok(AltEncoder {
            h,
            tri_rows: tri.rows,
            tri_cols: tri.cols,
            gap_rows,
            gap_cols,
            info_cols,
            tri_pos,
            phi_inv,
        })
    }

    pub fn n(&self) -> usize {
        self.h.ncols()
    }

    pub fn m(&self) -> usize {
        self.h.nrows()
    }

    /// Message length.
    pub fn k(&self) -> usize {
        self.info_cols.len()
    }

    pub fn gap(&self) -> usize {
        self.gap_rows.len()
    }

    /// Systematic positions, in message order.
    pub fn info_cols(&self) -> &[usize] {
        &self.info_cols
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.h
    }

    // y = T^{-1} w restricted to the triangular rows
    fn forward(&self, w: &[u8], y: &mut [u8]) {
        for (t, &r) in self.tri_rows.iter().enumerate() {
            let mut v = w[r];
            for (c, _) in self.h.row(r) {
                let tc = self.tri_pos[*c];
                if tc != NONE && tc < t {
                    v ^= y[tc];
                }
            }
            y[t] = v;
        }
    }

    /// Returns `c` with `phi(H) c^T = s` and `c[info_cols[i]] = u[i]`.
    pub fn encode(&self, u: &[u8], s: &[u8]) -> Result<Vec<u8>> {
        let (m, n) = (self.m(), self.n());
        if u.len() != self.k() || s.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "encoder takes {} message and {m} syndrome bits, got {} and {}",
                self.k(),
                u.len(),
                s.len()
            )));
        }
        let mut c = vec![0u8; n];
        let mut w: Vec<u8> = s.iter().map(|b| b & 1).collect();
        for (&col, &b) in self.info_cols.iter().zip(u) {
            if b & 1 == 1 {
                c[col] = 1;
                for &r in self.h.col_support(col) {
                    w[r] ^= 1;
                }
            }
        }
        let g = self.gap();
        let mut y = vec![0u8; self.tri_rows.len()];
        if g > 0 {
            self.forward(&w, &mut y);
            // rhs = w_gap + E y
            let mut rhs = vec![0u64; g.div_ceil(64)];
            for (k, &r) in self.gap_rows.iter().enumerate() {
                let mut v = w[r];
                for (col, _) in self.h.row(r) {
                    let t = self.tri_pos[*col];
                    if t != NONE {
                        v ^= y[t];
                    }
                }
                if v == 1 {
                    rhs[k / 64] |= 1 << (k % 64);
                }
            }
            let p1 = self.phi_inv.mul_packed(&rhs);
            for (j, &col) in self.gap_cols.iter().enumerate() {
                if (p1[j / 64] >> (j % 64)) & 1 == 1 {
                    c[col] = 1;
                    for &r in self.h.col_support(col) {
                        w[r] ^= 1;
                    }
                }
            }
        }
        self.forward(&w, &mut y);
        for (t, &col) in self.tri_cols.iter().enumerate() {
            c[col] = y[t];
        }
        Ok(c)
    }
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// One encoder per level of a spec.
#[derive(Clone, Debug)]
pub struct SpecEncoder {
    levels: Vec<AltEncoder>,
}

impl SpecEncoder {
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        let levels = (0..spec.levels())
            .map(|l| AltEncoder::new(spec.h(l), spec.gap(l)))
            .collect::<Result<_>>()?;
        Ok(SpecEncoder { levels })
    }

    pub fn level(&self, l: usize) -> &AltEncoder {
        &self.levels[l]
    }
}

impl CosetSolver for SpecEncoder {
    fn solve(&self, level: usize, u: &[u8], s: &[u8]) -> Result<Vec<u8>> {
        self.levels[level].encode(u, s)
    }
}

impl CosetSolver for AltEncoder {
    fn solve(&self, _level: usize, u: &[u8], s: &[u8]) -> Result<Vec<u8>> {
        self.encode(u, s)
    }
}
