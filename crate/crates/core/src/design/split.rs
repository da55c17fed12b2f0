use super::parent::{parent_mapping_with, triangular_parent_mapping_with};
use super::peg::select_check;
use super::{is_alt_form, Chooser, DesignOptions, ParentMapping, TieBreak};
use crate::error::{Error, Result};
use crate::gf2::{gf2_rank, int_matmul_mod, SparseMatrix, TannerDistanceOracle};

/// Outcome of a check split `B = F H`.
#[derive(Clone, Debug)]
pub struct SplitResult {
    /// Split matrix, `m x n`.
    pub h: SparseMatrix,
    /// Binary coupling matrix, `b x m`.
    pub f: SparseMatrix,
    pub mapping: ParentMapping,
    pub tie_break: TieBreak,
    pub retries: u32,
}

struct SplitState {
    h: SparseMatrix,
    oracle: TannerDistanceOracle,
    dist: Vec<crate::gf2::Distance>,
    scratch: Vec<usize>,
    targets: Vec<usize>,
}

impl SplitState {
    fn new(m: usize, n: usize) -> Self {
        SplitState {
            h: SparseMatrix::new(m, n),
            oracle: TannerDistanceOracle::new(m, n),
            dist: Vec::new(),
            scratch: Vec::new(),
            targets: Vec::new(),
        }
    }

    // places the edge of column j inherited from a parent among `children`
    fn place(&mut self, j: usize, children: impl Iterator<Item = usize>, chooser: &mut Chooser) {
        self.targets.clear();
        self.targets.extend(children);
        assert!(!self.targets.is_empty(), "no admissible child for column {j}");
        let m = self.h.nrows();
        if self.h.col_weight(j) == 0 {
            self.dist.clear();
            self.dist.resize(m, crate::gf2::Distance::INFINITE);
        } else {
            self.oracle
                .distances_from_variable(&self.h, j, Some(&self.targets), &mut self.dist);
        }
        let i = select_check(
            &self.h,
            &self.dist,
            self.targets.iter().copied(),
            chooser,
            &mut self.scratch,
        )
        .expect("non-empty candidate set");
        self.h.insert(i, j);
    }
}

fn split_with_retries(
    b: &SparseMatrix,
    m: usize,
    opts: &DesignOptions,
    mut build: impl FnMut(&mut Chooser) -> Result<(SparseMatrix, ParentMapping)>,
) -> Result<SplitResult> {
    let mut best_rank = 0;
    for attempt in 0..=opts.max_retries {
        let tie = opts.attempt(attempt);
        let mut chooser = Chooser::new(tie);
        let (h, mapping) = build(&mut chooser)?;
        let rank = gf2_rank(&h);
        if rank == m {
            let f = mapping.coupling_matrix();
            debug_assert!(verify_parts(b, &h, &f));
            return Ok(SplitResult {
                h,
                f,
                mapping,
                tie_break: tie,
                retries: attempt,
            });
        }
        log::debug!("split attempt {attempt}: rank {rank} < {m}, retrying");
        best_rank = best_rank.max(rank);
    }
    Err(Error::RankDeficient {
        expected: m,
        actual: best_rank,
        attempts: opts.max_retries + 1,
    })
}

fn check_base(b: &SparseMatrix, m: usize) -> Result<()> {
    if !b.is_binary() {
        return Err(Error::InvalidArgument("base matrix must be binary".into()));
    }
    if m < b.nrows() {
        return Err(Error::InvalidArgument(format!(
            "target rows {m} below base rows {}",
            b.nrows()
        )));
    }
    Ok(())
}

/// PEG-based check splitting of `b` into `m` rows.
///
/// Every edge `(k, j)` of `b` is moved to a child of `k` at maximal distance
/// from variable `j` in the partially built split matrix, preferring children
/// of low degree.
pub fn peg_check_split(b: &SparseMatrix, m: usize, opts: &DesignOptions) -> Result<SplitResult> {
    check_base(b, m)?;
    split_with_retries(b, m, opts, |chooser| {
        let mapping = parent_mapping_with(b, m, chooser)?;
        let mut st = SplitState::new(m, b.ncols());
        for j in 0..b.ncols() {
            for &k in b.col_support(j) {
                st.place(j, mapping.children(k).iter().copied(), chooser);
            }
        }
        Ok((st.h, mapping))
    })
}

/// Triangular PEG-based check splitting. `b_alt` must be in ALT form with
/// gap `gap`; the result is in ALT form with the same gap.
pub fn triangular_peg_check_split(
    b_alt: &SparseMatrix,
    gap: usize,
    m: usize,
    opts: &DesignOptions,
) -> Result<SplitResult> {
    check_base(b_alt, m)?;
    let nb = b_alt.nrows();
    if gap > nb || !is_alt_form(b_alt, gap) {
        return Err(Error::InvalidArgument(format!(
            "base matrix is not in ALT form with gap {gap}"
        )));
    }
    if m > b_alt.ncols() {
        return Err(Error::InvalidArgument(format!(
            "target rows {m} exceed length {}",
            b_alt.ncols()
        )));
    }
    let b = b_alt.flip();
    let tri = m - gap;
    let mut res = split_with_retries(b_alt, m, opts, |chooser| {
        let mapping = triangular_parent_mapping_with(&b, m, gap, chooser)?;
        let mut st = SplitState::new(m, b.ncols());
        for j in 0..b.ncols() {
            let k0 = if j < tri {
                st.h.insert(gap + j, j);
                Some(mapping.parent(gap + j))
            } else {
                None
            };
            let limit = (gap + j).min(m);
            for &k in b.col_support(j) {
                if Some(k) == k0 {
                    continue;
                }
                let kids = mapping.children(k).iter().copied().filter(|&i| i < limit);
                st.place(j, kids, chooser);
            }
        }
        // back to ALT orientation
        let parent: Vec<usize> = (0..m).map(|i| nb - 1 - mapping.parent(m - 1 - i)).collect();
        Ok((st.h.flip(), ParentMapping::new(parent, nb)?))
    })?;
    debug_assert!(is_alt_form(&res.h, gap));
    res.f = res.mapping.coupling_matrix();
    Ok(res)
}

fn verify_parts(b: &SparseMatrix, h: &SparseMatrix, f: &SparseMatrix) -> bool {
    if h.ncols() != b.ncols() || f.nrows() != b.nrows() || f.ncols() != h.nrows() {
        return false;
    }
    if !h.is_binary() || !f.is_binary() || h.col_weights() != b.col_weights() {
        return false;
    }
    // every child row has exactly one parent
    if (0..f.ncols()).any(|i| f.col_weight(i) != 1) {
        return false;
    }
    let Ok(prod) = int_matmul_mod(f, h, None) else {
        return false;
    };
    // integer equality also enforces the partition: an overlap shows up as a 2
    (0..b.nrows()).all(|k| prod.row(k) == b.row(k))
}

/// True when `result` is a valid check split of `b`: the child supports
/// partition each parent support, column weights are preserved and
/// `B = F H` holds over the integers.
pub fn verify_split(b: &SparseMatrix, result: &SplitResult) -> bool {
    verify_parts(b, &result.h, &result.f)
}
