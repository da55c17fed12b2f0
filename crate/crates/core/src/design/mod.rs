//! Construction of nested parity-check matrices.
//!
//! The highest-rate matrix is built with progressive edge growth (optionally
//! with an approximate triangular parity block), and lower-rate matrices are
//! derived by check splitting, which also yields the binary coupling matrices
//! `F` with `B = F H` over the integers.
//!
//! Matrices with a triangular structure are stored in approximate lower
//! triangular (ALT) form. With `m` rows, `n` columns and gap `g` the last `m`
//! columns are the parity block: columns `n-m..n-m+g` are the gap columns and
//! column `n-m+g+t` has a one in row `t` and no entries in rows `< t`, for
//! `t = 0..m-g`. The construction algorithms work in the opposite (upper)
//! orientation and flip on entry and exit.

mod parent;
mod peg;
mod report;
mod split;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use parent::{create_parent_mapping, create_triangular_parent_mapping, ParentMapping};
pub use peg::{peg_construct, peg_construct_triangular};
pub use report::DesignRecord;
pub use split::{peg_check_split, triangular_peg_check_split, verify_split, SplitResult};

use crate::gf2::SparseMatrix;
use crate::rng::{derive_seed, stream};

/// How the "choose some element" steps resolve ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TieBreak {
    /// Deterministic: lowest index wins.
    #[default]
    LowestIndex,
    /// Uniform choice from a generator seeded with the given value.
    Seeded(u64),
}

/// Options shared by every construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignOptions {
    pub tie_break: TieBreak,
    /// Additional attempts (with derived seeds) when the result is rank deficient.
    pub max_retries: u32,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions {
            tie_break: TieBreak::LowestIndex,
            max_retries: 32,
        }
    }
}

impl DesignOptions {
    pub fn seeded(seed: u64) -> Self {
        DesignOptions {
            tie_break: TieBreak::Seeded(seed),
            ..Default::default()
        }
    }

    /// Tie-break rule for attempt `attempt` (0 is the configured one).
    pub(crate) fn attempt(&self, attempt: u32) -> TieBreak {
        if attempt == 0 {
            return self.tie_break;
        }
        let base = match self.tie_break {
            TieBreak::LowestIndex => 0,
            TieBreak::Seeded(s) => s,
        };
        TieBreak::Seeded(derive_seed(base, "design-retry", attempt as u64))
    }
}

/// A constructed matrix together with how it was obtained.
#[derive(Clone, Debug)]
pub struct Construction {
    pub matrix: SparseMatrix,
    /// Tie-break rule of the successful attempt.
    pub tie_break: TieBreak,
    /// Number of failed attempts before the successful one.
    pub retries: u32,
}

pub(crate) struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    pub(crate) fn new(tie: TieBreak) -> Self {
        Chooser {
            rng: match tie {
                TieBreak::LowestIndex => None,
                TieBreak::Seeded(s) => Some(stream(s, "tie-break", 0)),
            },
        }
    }

    /// Picks one element of a non-empty candidate list (sorted ascending).
    pub(crate) fn pick(&mut self, candidates: &[usize]) -> usize {
        debug_assert!(!candidates.is_empty());
        match &mut self.rng {
            None => candidates[0],
            Some(rng) => candidates[rng.random_range(0..candidates.len())],
        }
    }
}

/// Checks the ALT layout described in the module docs.
pub fn is_alt_form(h: &SparseMatrix, gap: usize) -> bool {
    let (m, n) = (h.nrows(), h.ncols());
    if gap > m || m > n {
        return false;
    }
    let tri = m - gap;
    let first = n - m + gap;
    for t in 0..tri {
        let col = first + t;
        if h.get(t, col) % 2 != 1 {
            return false;
        }
        if h.col_support(col).iter().any(|&r| r < t && h.get(r, col) % 2 == 1) {
            return false;
        }
    }
    true
}
