//! Flooding sum-product decoding of coset codes `{c : H c^T = s}`.
//!
//! Each check node targets parity `s_i`. That is the same computation as
//! standard BP on the lengthened code `[I | H]` whose first `m` positions
//! are pinned to `s` with saturated LLRs; [`BpConfig::lengthened`] runs the
//! literal lengthened graph for conformance checks.

use super::llr::LLR_MAX;
use crate::gf2::SparseMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BpConfig {
    pub max_iter: usize,
    /// Stop as soon as the syndrome is satisfied.
    pub early_exit: bool,
    /// Message saturation.
    pub clamp: f64,
    /// Decode on the explicit lengthened graph instead of coset checks.
    pub lengthened: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            max_iter: 50,
            early_exit: true,
            clamp: LLR_MAX,
            lengthened: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpOutput {
    pub bits: Vec<u8>,
    /// The hard decision satisfies the syndrome.
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
struct Graph {
    nvars: usize,
    // edges grouped by check, check i owns check_edges[ptr[i]..ptr[i+1]]
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    // edge ids grouped by variable
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl Graph {
    fn new(h: &SparseMatrix) -> Self {
        let (m, n) = (h.nrows(), h.ncols());
        let mut check_ptr = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::new();
        check_ptr.push(0);
        for i in 0..m {
            for (j, v) in h.row(i) {
                if v % 2 == 1 {
                    edge_var.push(*j);
                }
            }
            check_ptr.push(edge_var.len());
        }
        let mut deg = vec![0usize; n];
        edge_var.iter().for_each(|&j| deg[j] += 1);
        let mut var_ptr = vec![0usize; n + 1];
        for j in 0..n {
            var_ptr[j + 1] = var_ptr[j] + deg[j];
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0usize; edge_var.len()];
        for (e, &j) in edge_var.iter().enumerate() {
            var_edges[fill[j]] = e;
            fill[j] += 1;
        }
        Graph {
            nvars: n,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
        }
    }

    fn nchecks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    fn syndrome_ok(&self, bits: &[u8], s: &[u8]) -> bool {
        (0..self.nchecks()).all(|i| {
            let p = self.edge_var[self.check_ptr[i]..self.check_ptr[i + 1]]
                .iter()
                .fold(0u8, |a, &j| a ^ bits[j]);
            p == s[i]
        })
    }
}

/// Reusable decoder for one parity-check matrix.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    h: SparseMatrix,
    graph: Graph,
    lengthened: Graph,
}

impl BpDecoder {
    pub fn new(h: &SparseMatrix) -> Self {
        let h = h.binary_view();
        BpDecoder {
            graph: Graph::new(&h),
            lengthened: Graph::new(&h.prepend_identity()),
            h,
        }
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.h
    }

    /// Decodes `llr` (positive favours 0) towards the coset with syndrome `s`.
    pub fn decode(&self, s: &[u8], llr: &[f64], cfg: &BpConfig) -> BpOutput {
        let (m, n) = (self.h.nrows(), self.h.ncols());
        assert_eq!(s.len(), m, "syndrome length");
        assert_eq!(llr.len(), n, "LLR length");
        if cfg.lengthened {
            let mut l2 = Vec::with_capacity(m + n);
            l2.extend(s.iter().map(|&b| if b & 1 == 1 { -cfg.clamp } else { cfg.clamp }));
            l2.extend_from_slice(llr);
            let zeros = vec![0u8; m];
            let done = |bits: &[u8]| self.graph.syndrome_ok(&bits[m..], s);
            let mut out = run(&self.lengthened, &zeros, &l2, cfg, &done);
            out.bits.drain(..m);
            out
        } else {
            run(&self.graph, s, llr, cfg, &|bits: &[u8]| self.graph.syndrome_ok(bits, s))
        }
    }
}

fn run(g: &Graph, s: &[u8], llr: &[f64], cfg: &BpConfig, satisfied: &dyn Fn(&[u8]) -> bool) -> BpOutput {
    let clamp = cfg.clamp;
    let ne = g.edge_var.len();
    let mut v2c: Vec<f64> = g.edge_var.iter().map(|&j| llr[j].clamp(-clamp, clamp)).collect();
    let mut c2v = vec![0.0f64; ne];
    let mut bits: Vec<u8> = llr.iter().map(|&x| (x < 0.0) as u8).collect();
    let mut t = Vec::new();
    let mut suffix = Vec::new();

    if satisfied(&bits) && cfg.early_exit {
        return BpOutput {
            bits,
            converged: true,
            iterations: 0,
        };
    }
    let mut iterations = 0;
    for _ in 0..cfg.max_iter {
        iterations += 1;
        for i in 0..g.nchecks() {
            let (a, b) = (g.check_ptr[i], g.check_ptr[i + 1]);
            let d = b - a;
            t.clear();
            t.extend(v2c[a..b].iter().map(|&x| (0.5 * x).tanh()));
            suffix.clear();
            suffix.resize(d + 1, 1.0);
            for k in (0..d).rev() {
                suffix[k] = suffix[k + 1] * t[k];
            }
            let flip = s[i] & 1 == 1;
            let mut prefix = 1.0f64;
            for k in 0..d {
                let mut loo = prefix * suffix[k + 1];
                if flip {
                    loo = -loo;
                }
                c2v[a + k] = (2.0 * loo.atanh()).clamp(-clamp, clamp);
                prefix *= t[k];
            }
        }
        for j in 0..g.nvars {
            let es = &g.var_edges[g.var_ptr[j]..g.var_ptr[j + 1]];
            let mut total = llr[j];
            for &e in es {
                total += c2v[e];
            }
            for &e in es {
                v2c[e] = (total - c2v[e]).clamp(-clamp, clamp);
            }
            bits[j] = (total < 0.0) as u8;
        }
        if cfg.early_exit && satisfied(&bits) {
            break;
        }
    }
    let converged = satisfied(&bits);
    BpOutput {
        bits,
        converged,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::channel_llr;

    fn dense(rows: &[&[u64]]) -> SparseMatrix {
        let v: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        SparseMatrix::from_dense(&v, Some(2)).unwrap()
    }

    #[test]
    fn noiseless_input_converges_immediately() {
        let h = dense(&[&[1, 1, 0, 1], &[0, 1, 1, 1]]);
        let dec = BpDecoder::new(&h);
        let c = [1u8, 0, 1, 0];
        let s = h.mul_gf2(&c);
        let llr: Vec<f64> = c.iter().map(|&b| if b == 1 { -LLR_MAX } else { LLR_MAX }).collect();
        let out = dec.decode(&s, &llr, &BpConfig::default());
        assert_eq!(out.bits, c);
        assert!(out.converged);
        assert!(out.iterations <= 1);
    }

    #[test]
    fn small_coset_matches_ml() {
        // coset {(1,0,0), (0,1,1)} of H = [[1,1,0],[0,1,1]] with s = (1,0)
        let h = dense(&[&[1, 1, 0], &[0, 1, 1]]);
        let dec = BpDecoder::new(&h);
        let s = [1u8, 0];
        for r in [[0.9, 0.1, 0.2], [0.1, 0.8, 1.1], [0.5, 0.0, 0.7], [1.3, 0.5, 0.5]] {
            let llr = channel_llr(&r, 0.4);
            let out = dec.decode(&s, &llr, &BpConfig::default());
            let score = |c: &[u8]| -> f64 { c.iter().zip(&llr).map(|(&b, &l)| if b == 1 { -l } else { l }).sum::<f64>() * 0.5 };
            let ml = if score(&[1, 0, 0]) >= score(&[0, 1, 1]) { vec![1, 0, 0] } else { vec![0, 1, 1] };
            if out.converged {
                assert_eq!(out.bits, ml, "r = {r:?}");
            }
        }
    }

    #[test]
    fn lengthened_graph_agrees() {
        let h = dense(&[&[1, 1, 0, 1, 0, 1], &[0, 1, 1, 1, 1, 0], &[1, 0, 1, 0, 1, 1]]);
        let dec = BpDecoder::new(&h);
        let s = [1u8, 0, 1];
        let llr = channel_llr(&[0.4, 1.2, 0.6, 0.9, 0.1, 1.6], 0.5);
        let a = dec.decode(&s, &llr, &BpConfig::default());
        let b = dec.decode(&s, &llr, &BpConfig { lengthened: true, ..Default::default() });
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_iteration_mode_runs_to_the_limit() {
        let h = dense(&[&[1, 1, 0], &[0, 1, 1]]);
        let dec = BpDecoder::new(&h);
        let cfg = BpConfig { max_iter: 7, early_exit: false, ..Default::default() };
        let out = dec.decode(&[0, 0], &[5.0, 5.0, 5.0], &cfg);
        assert_eq!(out.iterations, 7);
        assert!(out.converged);
    }

    #[test]
    fn zero_llr_decides_zero() {
        let h = dense(&[&[1, 1]]);
        let out = BpDecoder::new(&h).decode(&[0], &[0.0, 0.0], &BpConfig::default());
        assert_eq!(out.bits, vec![0, 0]);
    }
}
