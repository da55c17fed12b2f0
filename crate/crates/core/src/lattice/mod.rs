//! Generalized Construction D' lattices.
//!
//! A spec holds parity-check matrices `H_0, ..., H_{L-1}` (level `l` kept
//! modulo `2^{l+1}`) and optionally the coupling matrices `F_l` with
//! `H_l = F_l H_{l-1} (mod 2^l)`. The lattice is
//! `{v in Z^n : H_l v^T = 0 (mod 2^{l+1}) for all l}` and the code is its
//! intersection with `[0, 2^L)^n`.

mod gauss;

use std::collections::BTreeSet;
use std::f64::consts::{E, PI};

pub use gauss::GaussSolver;

use crate::error::{Error, Result};
use crate::gf2::{gf2_rank, int_matmul_mod, SparseMatrix};

/// Produces a member of the coset `{c : phi(H_l) c^T = s (mod 2)}` from a
/// message of `k_l` bits.
pub trait CosetSolver {
    fn solve(&self, level: usize, u: &[u8], s: &[u8]) -> Result<Vec<u8>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    n: usize,
    h: Vec<SparseMatrix>,
    f: Option<Vec<SparseMatrix>>,
    gaps: Vec<Option<usize>>,
}

/// Outcome of [`LatticeSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// `(m_l, rank phi(H_l))` per level.
    pub ranks: Vec<(usize, usize)>,
    pub coupling: Coupling,
    pub rows_nonincreasing: bool,
    /// A single level is ordinary Construction A.
    pub construction_a: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coupling {
    Verified,
    /// No coupling matrices were supplied.
    Unverified,
    /// The congruence fails at this level.
    Violated { level: usize },
}

impl ValidationReport {
    pub fn full_rank(&self) -> bool {
        self.ranks.iter().all(|&(m, r)| m == r)
    }

    pub fn is_valid(&self) -> bool {
        self.full_rank() && self.rows_nonincreasing && !matches!(self.coupling, Coupling::Violated { .. })
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (l, &(m, r)) in self.ranks.iter().enumerate() {
            writeln!(f, "level {l}: m = {m}, rank = {r}{}", if m == r { "" } else { " (deficient)" })?;
        }
        match self.coupling {
            Coupling::Verified => writeln!(f, "coupling: verified")?,
            Coupling::Unverified => writeln!(f, "coupling: unverified (no F supplied)")?,
            Coupling::Violated { level } => writeln!(f, "coupling: violated at level {level}")?,
        }
        if !self.rows_nonincreasing {
            writeln!(f, "row counts are not nonincreasing")?;
        }
        if self.construction_a {
            writeln!(f, "single level: Construction A")?;
        }
        Ok(())
    }
}

/// A codeword `c = sum_l 2^l c_l` with the syndromes used to build it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCodeword {
    pub levels: Vec<Vec<u8>>,
    pub composed: Vec<i64>,
    pub syndromes: Vec<Vec<u8>>,
}

impl LatticeCodeword {
    pub fn compose(levels: &[Vec<u8>]) -> Vec<i64> {
        let n = levels.first().map_or(0, Vec::len);
        (0..n)
            .map(|j| levels.iter().enumerate().map(|(l, c)| (c[j] as i64) << l).sum())
            .collect()
    }
}

impl LatticeSpec {
    /// Builds a spec, reducing `H_l` modulo `2^{l+1}`. `f[l-1]` is `F_l`
    /// (`m_l x m_{l-1}`, any integers).
    pub fn new(h: Vec<SparseMatrix>, f: Option<Vec<SparseMatrix>>) -> Result<Self> {
        let gaps = vec![None; h.len()];
        Self::with_gaps(h, f, gaps)
    }

    /// As [`new`](Self::new), with ALT gap hints for the encoder.
    pub fn with_gaps(
        h: Vec<SparseMatrix>,
        f: Option<Vec<SparseMatrix>>,
        gaps: Vec<Option<usize>>,
    ) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::InvalidArgument("a spec needs at least one level".into()));
        }
        if h.len() > 62 {
            return Err(Error::TooLarge(format!("{} levels", h.len())));
        }
        if gaps.len() != h.len() {
            return Err(Error::DimensionMismatch("one gap hint per level".into()));
        }
        let n = h[0].ncols();
        let mut reduced = Vec::with_capacity(h.len());
        for (l, hl) in h.into_iter().enumerate() {
            if hl.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "H_{l} has {} columns, H_0 has {n}",
                    hl.ncols()
                )));
            }
            let q = 1u64 << (l + 1);
            let mut out = SparseMatrix::with_modulus(hl.nrows(), n, Some(q));
            for i in 0..hl.nrows() {
                for &(j, v) in hl.row(i) {
                    out.set(i, j, v);
                }
            }
            reduced.push(out);
        }
        if let Some(fs) = &f {
            if fs.len() + 1 != reduced.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} coupling matrices for {} levels",
                    fs.len(),
                    reduced.len()
                )));
            }
            for (l, fl) in fs.iter().enumerate() {
                let (rows, cols) = (reduced[l + 1].nrows(), reduced[l].nrows());
                if fl.nrows() != rows || fl.ncols() != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "F_{} must be {rows}x{cols}, got {}x{}",
                        l + 1,
                        fl.nrows(),
                        fl.ncols()
                    )));
                }
            }
        }
        Ok(LatticeSpec {
            n,
            h: reduced,
            f,
            gaps,
        })
    }

    pub fn levels(&self) -> usize {
        self.h.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self, level: usize) -> &SparseMatrix {
        &self.h[level]
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.h
    }

    /// `F_l` for `l >= 1`.
    pub fn f(&self, level: usize) -> Option<&SparseMatrix> {
        assert!(level >= 1);
        self.f.as_ref().map(|fs| &fs[level - 1])
    }

    pub fn couplings(&self) -> Option<&[SparseMatrix]> {
        self.f.as_deref()
    }

    pub fn gap(&self, level: usize) -> Option<usize> {
        self.gaps[level]
    }

    pub fn m(&self, level: usize) -> usize {
        self.h[level].nrows()
    }

    /// Message length `k_l = n - m_l`.
    pub fn k(&self, level: usize) -> usize {
        self.n - self.m(level)
    }

    pub fn level_rate(&self, level: usize) -> f64 {
        self.k(level) as f64 / self.n as f64
    }

    /// Sum of the level rates, in bits per dimension.
    pub fn rate(&self) -> f64 {
        (0..self.levels()).map(|l| self.level_rate(l)).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        let ranks = self.h.iter().map(|h| (h.nrows(), gf2_rank(h))).collect();
        let coupling = match &self.f {
            None if self.levels() > 1 => Coupling::Unverified,
            None => Coupling::Verified,
            Some(fs) => {
                let mut status = Coupling::Verified;
                for (i, fl) in fs.iter().enumerate() {
                    let l = i + 1;
                    if !congruent(&self.h[l], fl, &self.h[l - 1], 1 << l) {
                        status = Coupling::Violated { level: l };
                        break;
                    }
                }
                status
            }
        };
        ValidationReport {
            ranks,
            coupling,
            rows_nonincreasing: self.h.windows(2).all(|w| w[0].nrows() >= w[1].nrows()),
            construction_a: self.levels() == 1,
        }
    }

    // H_l sum_{i<l} 2^i c_i, exactly
    fn accumulate(&self, level: usize, prior: &[Vec<u8>]) -> Result<Vec<i64>> {
        if prior.len() != level {
            return Err(Error::DimensionMismatch(format!(
                "level {level} needs {level} prior levels, got {}",
                prior.len()
            )));
        }
        if let Some(c) = prior.iter().find(|c| c.len() != self.n) {
            return Err(Error::DimensionMismatch(format!(
                "prior level of length {}, expected {}",
                c.len(),
                self.n
            )));
        }
        let v = LatticeCodeword::compose(prior);
        Ok(if level == 0 {
            vec![0; self.m(0)]
        } else {
            self.h[level].mul_int(&v)
        })
    }

    /// Syndrome `s_l = -H_l (sum_{i<l} 2^i c_i^T) / 2^l (mod 2)`.
    ///
    /// Fails with [`Error::Divisibility`] when the prior levels are not
    /// consistent codewords of their cosets.
    pub fn syndrome(&self, level: usize, prior: &[Vec<u8>]) -> Result<Vec<u8>> {
        let acc = self.accumulate(level, prior)?;
        let q = 1i64 << level;
        acc.iter()
            .enumerate()
            .map(|(row, &a)| {
                if a.rem_euclid(q) != 0 {
                    Err(Error::Divisibility { level, row })
                } else {
                    Ok((a / q).rem_euclid(2) as u8)
                }
            })
            .collect()
    }

    /// Like [`syndrome`](Self::syndrome) but never fails: the division by
    /// `2^l` truncates. Used by the decoder after an earlier level has been
    /// decoded to a non-codeword.
    pub fn syndrome_lossy(&self, level: usize, prior: &[Vec<u8>]) -> Vec<u8> {
        self.accumulate(level, prior)
            .expect("prior levels have the right shape")
            .iter()
            .map(|&a| (a.div_euclid(1 << level)).rem_euclid(2) as u8)
            .collect()
    }

    /// Sequential encoding: level by level, `c_l` is drawn from the coset
    /// selected by the lower levels.
    pub fn sequential_encode(
        &self,
        solver: &impl CosetSolver,
        messages: &[Vec<u8>],
    ) -> Result<LatticeCodeword> {
        if messages.len() != self.levels() {
            return Err(Error::DimensionMismatch(format!(
                "{} messages for {} levels",
                messages.len(),
                self.levels()
            )));
        }
        let mut levels: Vec<Vec<u8>> = Vec::with_capacity(self.levels());
        let mut syndromes = Vec::with_capacity(self.levels());
        for (l, u) in messages.iter().enumerate() {
            if u.len() != self.k(l) {
                return Err(Error::DimensionMismatch(format!(
                    "level {l} message has {} bits, expected {}",
                    u.len(),
                    self.k(l)
                )));
            }
            let s = self.syndrome(l, &levels)?;
            let c = solver.solve(l, u, &s)?;
            if c.len() != self.n || self.h[l].mul_gf2(&c) != s {
                return Err(Error::Construction(format!(
                    "coset solver returned a vector outside the level-{l} coset"
                )));
            }
            levels.push(c);
            syndromes.push(s);
        }
        Ok(LatticeCodeword {
            composed: LatticeCodeword::compose(&levels),
            levels,
            syndromes,
        })
    }

    /// Membership in the lattice (exact arithmetic, any integer vector).
    pub fn is_lattice_point(&self, v: &[i64]) -> bool {
        if v.len() != self.n {
            return false;
        }
        self.h.iter().enumerate().all(|(l, h)| {
            let q = 1i64 << (l + 1);
            (0..h.nrows()).all(|i| {
                h.row(i)
                    .iter()
                    .fold(0i64, |acc, &(j, a)| (acc + (a as i64 % q) * v[j].rem_euclid(q)) % q)
                    == 0
            })
        })
    }

    /// All points of the lattice in `[0, 2^L)^n`, by exhaustion.
    pub fn enumerate_codebook(&self) -> Result<BTreeSet<Vec<i64>>> {
        let bits = self.n * self.levels();
        if bits > 24 {
            return Err(Error::TooLarge(format!("2^{bits} candidates")));
        }
        let q = 1u64 << self.levels();
        let mut v = vec![0i64; self.n];
        let mut out = BTreeSet::new();
        for idx in 0..(1u64 << bits) {
            let mut x = idx;
            for vj in v.iter_mut() {
                *vj = (x % q) as i64;
                x /= q;
            }
            if self.is_lattice_point(&v) {
                out.insert(v.clone());
            }
        }
        Ok(out)
    }
}

fn congruent(hl: &SparseMatrix, f: &SparseMatrix, prev: &SparseMatrix, q: u64) -> bool {
    let Ok(prod) = int_matmul_mod(f, prev, Some(q)) else {
        return false;
    };
    (0..hl.nrows()).all(|i| {
        let lhs: Vec<(usize, u64)> = hl
            .row(i)
            .iter()
            .map(|&(j, v)| (j, v % q))
            .filter(|&(_, v)| v != 0)
            .collect();
        lhs.as_slice() == prod.row(i)
    })
}

/// Lifts nested binary parity-check matrices to a Generalized Construction D'
/// spec: `H_0 = B_0` and `H_l = F_l H_{l-1} (mod 2^l)`. Each lift must reduce
/// to the given binary matrix modulo 2.
pub fn lift(binary: &[SparseMatrix], f: Vec<SparseMatrix>) -> Result<LatticeSpec> {
    if binary.is_empty() || f.len() + 1 != binary.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coupling matrices for {} levels",
            f.len(),
            binary.len()
        )));
    }
    let mut h = vec![binary[0].binary_view()];
    for (i, fl) in f.iter().enumerate() {
        let l = i + 1;
        let lifted = int_matmul_mod(fl, &h[l - 1], Some(1 << l))?;
        if lifted.binary_view() != binary[l].binary_view() {
            return Err(Error::Construction(format!(
                "F_{l} H_{} does not reduce to the given H_{l} modulo 2",
                l - 1
            )));
        }
        h.push(lifted);
    }
    LatticeSpec::new(h, Some(f))
}

/// Volume-to-noise ratio `2^{2(L - R)} / (2 pi e sigma^2)` of a lattice with
/// `L` levels and rate `R` bits per dimension.
pub fn vnr(levels: usize, rate: f64, sigma: f64) -> f64 {
    (2.0 * (levels as f64 - rate)).exp2() / (2.0 * PI * E * sigma * sigma)
}

pub fn vnr_db(levels: usize, rate: f64, sigma: f64) -> f64 {
    10.0 * vnr(levels, rate, sigma).log10()
}

/// Noise level at which the VNR equals `db`.
pub fn sigma_for_vnr_db(levels: usize, rate: f64, db: f64) -> f64 {
    let ratio = 10f64.powf(db / 10.0);
    ((2.0 * (levels as f64 - rate)).exp2() / (2.0 * PI * E * ratio)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[u64]], q: Option<u64>) -> SparseMatrix {
        let v: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        SparseMatrix::from_dense(&v, q).unwrap()
    }

    pub(crate) fn nested_spec() -> LatticeSpec {
        let h0 = dense(&[&[1, 1, 1, 1], &[1, 0, 1, 0], &[1, 1, 0, 0]], Some(2));
        let h1 = dense(&[&[1, 1, 1, 1], &[1, 0, 1, 0]], Some(2));
        let h2 = dense(&[&[1, 1, 1, 1]], Some(2));
        let f1 = dense(&[&[1, 0, 0], &[0, 1, 0]], None);
        let f2 = dense(&[&[1, 0]], None);
        LatticeSpec::new(vec![h0, h1, h2], Some(vec![f1, f2])).unwrap()
    }

    fn coupled_spec() -> LatticeSpec {
        let h0 = dense(&[&[1, 1, 1, 1], &[1, 0, 1, 0], &[1, 1, 0, 0]], Some(2));
        let f1 = dense(&[&[2, 7, 4], &[11, 9, 6]], None);
        let f2 = dense(&[&[3, 5]], None);
        let h1 = int_matmul_mod(&f1, &h0, Some(2)).unwrap();
        let h2 = int_matmul_mod(&f2, &h1, Some(4)).unwrap();
        LatticeSpec::new(vec![h0, h1, h2], Some(vec![f1, f2])).unwrap()
    }

    // solver that returns a fixed vector per level
    struct Fixed(Vec<Vec<u8>>);
    impl CosetSolver for Fixed {
        fn solve(&self, level: usize, _: &[u8], _: &[u8]) -> Result<Vec<u8>> {
            Ok(self.0[level].clone())
        }
    }

    #[test]
    fn nested_spec_sequential_encoding() {
        let spec = nested_spec();
        assert!(spec.validate().is_valid());
        let c0 = vec![1, 1, 1, 1];
        let c1 = vec![0, 1, 1, 0];
        assert_eq!(spec.syndrome(0, &[]).unwrap(), vec![0, 0, 0]);
        assert_eq!(spec.syndrome(1, std::slice::from_ref(&c0)).unwrap(), vec![0, 1]);
        assert_eq!(spec.syndrome(2, &[c0.clone(), c1.clone()]).unwrap(), vec![0]);
        let solver = Fixed(vec![c0, c1, vec![0, 0, 1, 1]]);
        let msgs = vec![vec![0], vec![0, 0], vec![0, 0, 0]];
        let cw = spec.sequential_encode(&solver, &msgs).unwrap();
        assert_eq!(cw.composed, vec![1, 3, 7, 5]);
        assert!(spec.is_lattice_point(&cw.composed));
        assert!(!spec.is_lattice_point(&[1, 3, 7, 6]));
    }

    #[test]
    fn coupled_spec_matrices_and_rate() {
        let spec = coupled_spec();
        assert_eq!(spec.h(1).to_dense(), vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        assert_eq!(spec.h(2).to_dense(), vec![vec![3, 1, 3, 1]]);
        let report = spec.validate();
        assert!(report.is_valid(), "{report}");
        assert_eq!(report.coupling, Coupling::Verified);
        let rates: Vec<f64> = (0..3).map(|l| spec.level_rate(l)).collect();
        assert_eq!(rates, vec![0.25, 0.5, 0.75]);
        assert_eq!(spec.rate(), 1.5);
        assert_eq!(spec.enumerate_codebook().unwrap().len(), 64);
        // the non-equivalence argument: c_0 = 1 gives s_1 = (1, 1)
        assert_eq!(spec.syndrome(1, &[vec![1, 1, 1, 1]]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let spec = coupled_spec();
        let mut h = spec.matrices().to_vec();
        h[1].set(1, 1, 0);
        h[1].set(1, 3, 0);
        let bad = LatticeSpec::new(h, None).unwrap();
        let report = bad.validate();
        assert_eq!(report.ranks[1], (2, 1));
        assert!(!report.is_valid());
        assert_eq!(report.coupling, Coupling::Unverified);
    }

    #[test]
    fn nested_spec_codebook_size() {
        let spec = nested_spec();
        assert_eq!(spec.enumerate_codebook().unwrap().len(), 64);
    }

    #[test]
    fn two_level_repetition_codebook() {
        let set = |pts: &[[i64; 2]]| -> BTreeSet<Vec<i64>> { pts.iter().map(|v| v.to_vec()).collect() };
        let h = dense(&[&[1, 1]], Some(2));
        // v0 + v1 = 0 mod 4, so 2^{1+1} points
        let spec = LatticeSpec::new(vec![h.clone(), h.clone()], None).unwrap();
        assert_eq!(
            spec.enumerate_codebook().unwrap(),
            set(&[[0, 0], [1, 3], [2, 2], [3, 1]])
        );
        // an unconstrained top level gives C_0 + 2Z^2
        let open = LatticeSpec::new(vec![h, SparseMatrix::new(0, 2)], None).unwrap();
        assert_eq!(
            open.enumerate_codebook().unwrap(),
            set(&[[0, 0], [1, 1], [2, 2], [3, 3], [0, 2], [2, 0], [1, 3], [3, 1]])
        );
    }

    #[test]
    fn generalized_membership_with_a_lifted_row() {
        let h0 = dense(&[&[1, 0, 0, 1], &[1, 1, 0, 0]], Some(2));
        let f1 = dense(&[&[3, 1]], None);
        let h1 = int_matmul_mod(&f1, &h0, Some(4)).unwrap();
        assert_eq!(h1.to_dense(), vec![vec![0, 1, 0, 3]]);
        let spec = LatticeSpec::new(vec![h0, h1], Some(vec![f1])).unwrap();
        assert_eq!(spec.syndrome(1, &[vec![1, 1, 1, 1]]).unwrap(), vec![0]);
        assert!(spec.is_lattice_point(&[1, 1, 1, 1]));
    }

    #[test]
    fn lattice_contains_scaled_integers() {
        let spec = nested_spec();
        assert!(spec.is_lattice_point(&[0, 0, 0, 0]));
        assert!(spec.is_lattice_point(&[8, 0, 0, 0]));
        assert!(spec.is_lattice_point(&[1 - 8, 3 + 16, 7, 5 - 24]));
        assert!(!spec.is_lattice_point(&[1 - 8, 3 + 16, 7, 6 - 24]));
    }

    #[test]
    fn divisibility_failure() {
        let spec = nested_spec();
        // not a level-0 codeword
        let err = spec.syndrome(1, &[vec![1, 0, 0, 0]]).unwrap_err();
        assert!(matches!(err, Error::Divisibility { level: 1, .. }));
        assert_eq!(spec.syndrome_lossy(1, &[vec![1, 0, 0, 0]]), vec![0, 0]);
    }

    #[test]
    fn single_level_is_flagged() {
        let spec = LatticeSpec::new(vec![dense(&[&[1, 1]], Some(2))], None).unwrap();
        let r = spec.validate();
        assert!(r.construction_a);
        assert!(r.is_valid());
    }

    #[test]
    fn vnr_values() {
        assert!((vnr_db(2, 1.13, 0.3380) - 2.34).abs() < 0.01);
        let s = (1.0 / (2.0 * PI * E)).sqrt();
        assert!((vnr(2, 2.0, s) - 1.0).abs() < 1e-12);
        let sigma = sigma_for_vnr_db(2, 1.478, 1.356);
        assert!((vnr_db(2, 1.478, sigma) - 1.356).abs() < 1e-12);
    }

    #[test]
    fn lift_of_a_split_chain() {
        let h2 = dense(&[&[1; 8]], Some(2));
        let h1 = dense(&[&[1, 0, 0, 1, 0, 1, 1, 0], &[0, 1, 1, 0, 1, 0, 0, 1]], Some(2));
        let h0 = dense(
            &[
                &[0, 0, 0, 1, 0, 1, 0, 0],
                &[1, 0, 0, 0, 0, 0, 1, 0],
                &[0, 1, 0, 0, 0, 0, 0, 1],
                &[0, 0, 1, 0, 1, 0, 0, 0],
            ],
            Some(2),
        );
        let f1 = dense(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], None);
        let f2 = dense(&[&[1, 1]], None);
        let spec = lift(&[h0, h1.clone(), h2.clone()], vec![f1, f2]).unwrap();
        assert!(spec.validate().is_valid());
        assert_eq!(spec.h(1).binary_view(), h1);
        assert_eq!(spec.h(2).binary_view(), h2);
        // check splitting gives binary lifts
        assert!(spec.matrices().iter().all(SparseMatrix::is_binary));
    }
}
