use super::{Chooser, Construction, DesignOptions, TieBreak};
use crate::error::{Error, Result};
use crate::gf2::{gf2_rank, Distance, SparseMatrix, TannerDistanceOracle};

/// Per-column edge rule used by the PEG builder.
struct ColumnRule {
    weight: usize,
    /// Forced edge placed before the PEG edges.
    diagonal: Option<usize>,
    /// PEG edges may only use rows `< limit`.
    limit: usize,
}

/// Picks among `candidates` the check at maximal distance from the current
/// variable, then of lowest degree, then by the chooser.
pub(crate) fn select_check(
    h: &SparseMatrix,
    dist: &[Distance],
    candidates: impl Iterator<Item = usize>,
    chooser: &mut Chooser,
    scratch: &mut Vec<usize>,
) -> Option<usize> {
    scratch.clear();
    let mut best = (Distance::finite(0), usize::MAX);
    for i in candidates {
        let key = (dist[i], h.row_weight(i));
        if scratch.is_empty() || key.0 > best.0 || (key.0 == best.0 && key.1 < best.1) {
            best = key;
            scratch.clear();
            scratch.push(i);
        } else if key == best {
            scratch.push(i);
        }
    }
    (!scratch.is_empty()).then(|| chooser.pick(scratch))
}

fn peg_build(
    m: usize,
    n: usize,
    rule: impl Fn(usize) -> ColumnRule,
    tie: TieBreak,
) -> Result<SparseMatrix> {
    let mut chooser = Chooser::new(tie);
    let mut h = SparseMatrix::new(m, n);
    let mut oracle = TannerDistanceOracle::new(m, n);
    let mut dist = Vec::with_capacity(m);
    let mut scratch = Vec::new();
    for j in 0..n {
        let r = rule(j);
        if let Some(d) = r.diagonal {
            h.insert(d, j);
        }
        while h.col_weight(j) < r.weight {
            if h.col_weight(j) == 0 {
                dist.clear();
                dist.resize(m, Distance::INFINITE);
            } else {
                oracle.distances_from_variable(&h, j, None, &mut dist);
            }
            let cands = (0..r.limit).filter(|&i| h.get(i, j) == 0);
            let Some(i) = select_check(&h, &dist, cands, &mut chooser, &mut scratch) else {
                return Err(Error::Construction(format!(
                    "no admissible check left for column {j}"
                )));
            };
            h.insert(i, j);
        }
    }
    Ok(h)
}

fn with_retries(
    m: usize,
    opts: &DesignOptions,
    mut build: impl FnMut(TieBreak) -> Result<SparseMatrix>,
) -> Result<Construction> {
    let mut best_rank = 0;
    for attempt in 0..=opts.max_retries {
        let tie = opts.attempt(attempt);
        let h = build(tie)?;
        let rank = gf2_rank(&h);
        if rank == m {
            return Ok(Construction {
                matrix: h,
                tie_break: tie,
                retries: attempt,
            });
        }
        log::debug!("attempt {attempt}: rank {rank} < {m}, retrying");
        best_rank = best_rank.max(rank);
    }
    Err(Error::RankDeficient {
        expected: m,
        actual: best_rank,
        attempts: opts.max_retries + 1,
    })
}

fn check_dims(n: usize, m: usize, dv: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    if dv == 0 || dv > m {
        return Err(Error::InvalidArgument(format!(
            "variable degree {dv} not placeable on {m} checks"
        )));
    }
    Ok(())
}

/// Progressive edge growth: variables are processed left to right and every
/// edge goes to a check at maximal Tanner-graph distance (unreachable checks
/// first), preferring low-degree checks. The result has full rank mod 2.
pub fn peg_construct(n: usize, m: usize, dv: usize, opts: &DesignOptions) -> Result<Construction> {
    check_dims(n, m, dv)?;
    with_retries(m, opts, |tie| {
        peg_build(
            m,
            n,
            |_| ColumnRule {
                weight: dv,
                diagonal: None,
                limit: m,
            },
            tie,
        )
    })
}

/// PEG with an approximate triangular parity block of gap `gap`, returned in
/// ALT form.
///
/// In upper orientation column `j < m - gap` gets a forced edge at row
/// `gap + j` and its other edges only in rows above it. When fewer than
/// `dv - 1` such rows exist (only possible for tiny gaps) the column weight
/// is capped at `gap + j + 1`.
pub fn peg_construct_triangular(
    n: usize,
    m: usize,
    dv: usize,
    gap: usize,
    opts: &DesignOptions,
) -> Result<Construction> {
    check_dims(n, m, dv)?;
    if gap >= m {
        return peg_construct(n, m, dv, opts);
    }
    let tri = m - gap;
    let mut c = with_retries(m, opts, |tie| {
        peg_build(
            m,
            n,
            |j| {
                if j < tri {
                    ColumnRule {
                        weight: dv.min(gap + j + 1),
                        diagonal: Some(gap + j),
                        limit: gap + j,
                    }
                } else {
                    ColumnRule {
                        weight: dv,
                        diagonal: None,
                        limit: m,
                    }
                }
            },
            tie,
        )
    })?;
    c.matrix = c.matrix.flip();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::is_alt_form;
    use crate::gf2::girth;

    #[test]
    fn degree_one_spreads_evenly() {
        let c = peg_construct(8, 4, 1, &DesignOptions::default()).unwrap();
        assert!(c.matrix.col_weights().iter().all(|&w| w == 1));
        assert!(c.matrix.row_weights().iter().all(|&w| w == 2));
    }

    #[test]
    fn square_degree_one_is_a_permutation() {
        for seed in 0..4 {
            let c = peg_construct(4, 4, 1, &DesignOptions::seeded(seed)).unwrap();
            assert!(c.matrix.row_weights().iter().all(|&w| w == 1));
            assert_eq!(girth(&c.matrix), Distance::INFINITE);
        }
    }

    #[test]
    fn regular_code_has_full_rank_and_no_four_cycles() {
        let c = peg_construct(1024, 103, 3, &DesignOptions::default()).unwrap();
        assert_eq!(gf2_rank(&c.matrix), 103);
        assert!(c.matrix.col_weights().iter().all(|&w| w == 3));
        assert!(girth(&c.matrix) >= Distance::finite(6));
    }

    #[test]
    fn zero_gap_gives_unit_lower_triangle() {
        let c = peg_construct_triangular(8, 4, 2, 0, &DesignOptions::default()).unwrap();
        let h = &c.matrix;
        assert!(is_alt_form(h, 0));
        // parity block is the last four columns
        for t in 0..4 {
            assert_eq!(h.get(t, 4 + t), 1);
            for r in 0..t {
                assert_eq!(h.get(r, 4 + t), 0);
            }
        }
        // the first triangular column can only hold its diagonal
        assert_eq!(h.col_weight(7), 1);
        assert!(h.col_weights()[..7].iter().all(|&w| w == 2));
    }

    #[test]
    fn full_gap_reduces_to_plain_peg() {
        let opts = DesignOptions::default();
        let a = peg_construct_triangular(1000, 22, 3, 22, &opts).unwrap();
        let b = peg_construct(1000, 22, 3, &opts).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn triangular_design_point() {
        let c = peg_construct_triangular(1024, 103, 3, 22, &DesignOptions::default()).unwrap();
        assert!(is_alt_form(&c.matrix, 22));
        assert_eq!(gf2_rank(&c.matrix), 103);
        assert!(c.matrix.col_weights().iter().all(|&w| w == 3));
    }

    #[test]
    fn bad_dimensions() {
        let o = DesignOptions::default();
        assert!(peg_construct(4, 5, 2, &o).is_err());
        assert!(peg_construct(4, 2, 3, &o).is_err());
    }
}
