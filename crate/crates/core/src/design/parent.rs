use std::cmp::Ordering;

use super::{Chooser, TieBreak};
use crate::error::{Error, Result};
use crate::gf2::SparseMatrix;

/// Surjective map from child rows of `H` to parent rows of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParentMapping {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl ParentMapping {
    /// Builds a mapping from `parent[i]` values over `b` parents.
    pub fn new(parent: Vec<usize>, b: usize) -> Result<Self> {
        let mut children = vec![Vec::new(); b];
        for (i, &k) in parent.iter().enumerate() {
            if k >= b {
                return Err(Error::InvalidArgument(format!(
                    "parent {k} of child {i} exceeds {b} base rows"
                )));
            }
            children[k].push(i);
        }
        if let Some(k) = children.iter().position(Vec::is_empty) {
            return Err(Error::InvalidArgument(format!(
                "mapping is not surjective: base row {k} has no child"
            )));
        }
        Ok(ParentMapping { parent, children })
    }

    /// Number of child rows.
    pub fn m(&self) -> usize {
        self.parent.len()
    }

    /// Number of parent rows.
    pub fn b(&self) -> usize {
        self.children.len()
    }

    pub fn parent(&self, i: usize) -> usize {
        self.parent[i]
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Preimage `p^{-1}(k)`, ascending.
    pub fn children(&self, k: usize) -> &[usize] {
        &self.children[k]
    }

    /// Binary `b x m` matrix whose row `k` is the indicator of `p^{-1}(k)`.
    pub fn coupling_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_row_supports(self.m(), &self.children)
    }
}

// mu_p(k) = |J_k(B)| / (|p^{-1}(k)| + 1), compared exactly as fractions
fn cmp_mu(weights: &[usize], counts: &[usize], a: usize, b: usize) -> Ordering {
    (weights[a] * (counts[b] + 1)).cmp(&(weights[b] * (counts[a] + 1)))
}

fn assign(
    weights: &[usize],
    counts: &mut [usize],
    candidates: &[usize],
    chooser: &mut Chooser,
) -> usize {
    let mut best: Vec<usize> = Vec::new();
    for &k in candidates {
        match best.first() {
            None => best.push(k),
            Some(&b0) => match cmp_mu(weights, counts, k, b0) {
                Ordering::Greater => {
                    best.clear();
                    best.push(k);
                }
                Ordering::Equal => best.push(k),
                Ordering::Less => {}
            },
        }
    }
    let k = chooser.pick(&best);
    counts[k] += 1;
    k
}

pub(crate) fn parent_mapping_with(
    b: &SparseMatrix,
    m: usize,
    chooser: &mut Chooser,
) -> Result<ParentMapping> {
    let nb = b.nrows();
    if m < nb {
        return Err(Error::InvalidArgument(format!(
            "target rows {m} below base rows {nb}"
        )));
    }
    let weights = b.row_weights();
    let mut counts = vec![1usize; nb];
    let mut parent: Vec<usize> = (0..nb).collect();
    let all: Vec<usize> = (0..nb).collect();
    for _ in nb..m {
        parent.push(assign(&weights, &mut counts, &all, chooser));
    }
    ParentMapping::new(parent, nb)
}

/// Parent mapping for PEG-based check splitting: the first `b` children map
/// to themselves and every further child goes to a parent maximising the
/// expected child row weight `|J_k(B)| / (|p^{-1}(k)| + 1)`.
pub fn create_parent_mapping(b: &SparseMatrix, m: usize, tie: TieBreak) -> Result<ParentMapping> {
    parent_mapping_with(b, m, &mut Chooser::new(tie))
}

pub(crate) fn triangular_parent_mapping_with(
    b_upper: &SparseMatrix,
    m: usize,
    gap: usize,
    chooser: &mut Chooser,
) -> Result<ParentMapping> {
    let nb = b_upper.nrows();
    if m < nb {
        return Err(Error::InvalidArgument(format!(
            "target rows {m} below base rows {nb}"
        )));
    }
    if gap > nb {
        return Err(Error::InvalidArgument(format!(
            "gap {gap} exceeds base rows {nb}"
        )));
    }
    // identity part must already sit on the gap-th subdiagonal of B
    for i in gap..nb {
        if b_upper.get(i, i - gap) % 2 != 1 {
            return Err(Error::InfeasibleMapping(format!(
                "base row {i} does not cover diagonal column {}",
                i - gap
            )));
        }
    }
    let weights = b_upper.row_weights();
    let mut counts = vec![1usize; nb];
    let mut parent: Vec<usize> = (0..nb).collect();
    for i in nb..m {
        let col = i - gap;
        if col >= b_upper.ncols() {
            return Err(Error::InfeasibleMapping(format!(
                "child row {i} would need diagonal column {col} beyond n"
            )));
        }
        let candidates = b_upper.col_support(col);
        if candidates.is_empty() {
            return Err(Error::InfeasibleMapping(format!(
                "column {col} of the base matrix is empty"
            )));
        }
        parent.push(assign(&weights, &mut counts, candidates, chooser));
    }
    ParentMapping::new(parent, nb)
}

/// Parent mapping for triangular check splitting. `b_upper` must be in
/// approximate upper triangular form with gap `gap`; child `g + j` is
/// restricted to parents covering column `j` so that the diagonal entry
/// `(g + j, j)` can be placed.
pub fn create_triangular_parent_mapping(
    b_upper: &SparseMatrix,
    m: usize,
    gap: usize,
    tie: TieBreak,
) -> Result<ParentMapping> {
    triangular_parent_mapping_with(b_upper, m, gap, &mut Chooser::new(tie))
}
