use serde::{Deserialize, Serialize};

use super::TieBreak;
use crate::gf2::{gf2_rank, girth, SparseMatrix};

/// One line of the JSON-lines design report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignRecord {
    pub level: usize,
    pub n: usize,
    pub m: usize,
    /// Maximum column weight.
    pub dv: usize,
    pub gap: Option<usize>,
    /// `None` for a cycle-free graph.
    pub girth: Option<u32>,
    pub rank: usize,
    pub tie_break: TieBreak,
    pub retries: u32,
}

impl DesignRecord {
    pub fn describe(
        level: usize,
        h: &SparseMatrix,
        gap: Option<usize>,
        tie_break: TieBreak,
        retries: u32,
    ) -> Self {
        DesignRecord {
            level,
            n: h.ncols(),
            m: h.nrows(),
            dv: h.col_weights().into_iter().max().unwrap_or(0),
            gap,
            girth: girth(h).value(),
            rank: gf2_rank(h),
            tie_break,
            retries,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let h = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]], Some(2)).unwrap();
        let r = DesignRecord::describe(1, &h, Some(0), TieBreak::Seeded(5), 2);
        assert_eq!(r.girth, None);
        assert_eq!(r.rank, 2);
        let back: DesignRecord = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
    }
}
