//! Tanner-graph queries: check-to-variable distances and girth.
//!
//! Distances count edges, so a check directly connected to a variable is at
//! distance 1 and every check-to-variable distance is odd. Unreachable pairs
//! have distance [`Distance::INFINITE`], which compares greater than any
//! finite distance.

use std::collections::VecDeque;
use std::fmt;

use super::SparseMatrix;

/// Edge-count distance in a Tanner graph; `INFINITE` when disconnected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(u32);

impl Distance {
    pub const INFINITE: Distance = Distance(u32::MAX);

    pub fn finite(d: u32) -> Self {
        assert!(d != u32::MAX);
        Distance(d)
    }

    pub fn is_finite(self) -> bool {
        self != Self::INFINITE
    }

    pub fn value(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "inf"),
        }
    }
}

/// Breadth-first search workspace reused across queries on graphs with the
/// same number of check and variable nodes.
#[derive(Clone, Debug)]
pub struct TannerDistanceOracle {
    check_dist: Vec<u32>,
    var_dist: Vec<u32>,
    touched_checks: Vec<usize>,
    touched_vars: Vec<usize>,
    queue: VecDeque<Node>,
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Check(usize),
    Var(usize),
}

const UNSEEN: u32 = u32::MAX;

impl TannerDistanceOracle {
    pub fn new(nchecks: usize, nvars: usize) -> Self {
        TannerDistanceOracle {
            check_dist: vec![UNSEEN; nchecks],
            var_dist: vec![UNSEEN; nvars],
            touched_checks: Vec::new(),
            touched_vars: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    pub fn for_matrix(m: &SparseMatrix) -> Self {
        Self::new(m.nrows(), m.ncols())
    }

    fn reset(&mut self) {
        for &c in &self.touched_checks {
            self.check_dist[c] = UNSEEN;
        }
        for &v in &self.touched_vars {
            self.var_dist[v] = UNSEEN;
        }
        self.touched_checks.clear();
        self.touched_vars.clear();
        self.queue.clear();
    }

    fn grow(&mut self, m: &SparseMatrix) {
        if self.check_dist.len() < m.nrows() {
            self.check_dist.resize(m.nrows(), UNSEEN);
        }
        if self.var_dist.len() < m.ncols() {
            self.var_dist.resize(m.ncols(), UNSEEN);
        }
    }

    /// Distance from check `i` to variable `j` in the Tanner graph of `m`.
    /// The matrix is treated as binary (its stored support).
    pub fn check_variable_distance(&mut self, m: &SparseMatrix, i: usize, j: usize) -> Distance {
        assert!(i < m.nrows() && j < m.ncols(), "node index out of range");
        self.grow(m);
        self.reset();
        self.check_dist[i] = 0;
        self.touched_checks.push(i);
        self.queue.push_back(Node::Check(i));
        while let Some(node) = self.queue.pop_front() {
            match node {
                Node::Check(c) => {
                    let d = self.check_dist[c] + 1;
                    for v in m.row_support(c) {
                        if self.var_dist[v] == UNSEEN {
                            if v == j {
                                return Distance(d);
                            }
                            self.var_dist[v] = d;
                            self.touched_vars.push(v);
                            self.queue.push_back(Node::Var(v));
                        }
                    }
                }
                Node::Var(v) => {
                    let d = self.var_dist[v] + 1;
                    for &c in m.col_support(v) {
                        if self.check_dist[c] == UNSEEN {
                            self.check_dist[c] = d;
                            self.touched_checks.push(c);
                            self.queue.push_back(Node::Check(c));
                        }
                    }
                }
            }
        }
        Distance::INFINITE
    }

    /// Distances from variable `j` to every check node, written into `out`.
    ///
    /// When `targets` is given the search stops as soon as every target check
    /// has been reached; unreached checks (targets or not) report
    /// `INFINITE` for the ones that are truly disconnected and may report
    /// `INFINITE` for far non-target checks after an early stop.
    pub fn distances_from_variable(
        &mut self,
        m: &SparseMatrix,
        j: usize,
        targets: Option<&[usize]>,
        out: &mut Vec<Distance>,
    ) {
        self.grow(m);
        self.reset();
        out.clear();
        out.resize(m.nrows(), Distance::INFINITE);
        let mut remaining = targets.map(|t| t.len());
        let is_target = |c: usize| targets.is_none_or(|t| t.contains(&c));
        self.var_dist[j] = 0;
        self.touched_vars.push(j);
        self.queue.push_back(Node::Var(j));
        while let Some(node) = self.queue.pop_front() {
            match node {
                Node::Var(v) => {
                    let d = self.var_dist[v] + 1;
                    for &c in m.col_support(v) {
                        if self.check_dist[c] == UNSEEN {
                            self.check_dist[c] = d;
                            self.touched_checks.push(c);
                            out[c] = Distance(d);
                            if let Some(r) = remaining.as_mut() {
                                if is_target(c) {
                                    *r -= 1;
                                }
                            }
                            self.queue.push_back(Node::Check(c));
                        }
                    }
                    if remaining == Some(0) {
                        // finish the current level so ties stay exact
                        self.drain_level(m, d, out);
                        return;
                    }
                }
                Node::Check(c) => {
                    let d = self.check_dist[c] + 1;
                    for v in m.row_support(c) {
                        if self.var_dist[v] == UNSEEN {
                            self.var_dist[v] = d;
                            self.touched_vars.push(v);
                            self.queue.push_back(Node::Var(v));
                        }
                    }
                }
            }
        }
    }

    // Labels the remaining checks at distance `level` reachable from queued
    // variables at distance `level - 1`.
    fn drain_level(&mut self, m: &SparseMatrix, level: u32, out: &mut [Distance]) {
        while let Some(node) = self.queue.pop_front() {
            if let Node::Var(v) = node {
                if self.var_dist[v] + 1 != level {
                    continue;
                }
                for &c in m.col_support(v) {
                    if self.check_dist[c] == UNSEEN {
                        self.check_dist[c] = level;
                        self.touched_checks.push(c);
                        out[c] = Distance(level);
                    }
                }
            }
        }
    }
}

/// Convenience wrapper around [`TannerDistanceOracle::check_variable_distance`].
pub fn check_variable_distance(m: &SparseMatrix, i: usize, j: usize) -> Distance {
    TannerDistanceOracle::for_matrix(m).check_variable_distance(m, i, j)
}

/// Length of the shortest cycle in the Tanner graph of `phi(m)`, or
/// `INFINITE` if the graph is a forest.
pub fn girth(m: &SparseMatrix) -> Distance {
    let h = m.binary_view();
    let (nc, nv) = (h.nrows(), h.ncols());
    // node ids: checks 0..nc, variables nc..nc+nv
    let mut dist = vec![UNSEEN; nc + nv];
    let mut parent = vec![usize::MAX; nc + nv];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut best = u32::MAX;

    for root in 0..nv {
        if h.col_weight(root) < 2 {
            continue;
        }
        for &t in &touched {
            dist[t] = UNSEEN;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        let r = nc + root;
        dist[r] = 0;
        touched.push(r);
        queue.push_back(r);
        'bfs: while let Some(u) = queue.pop_front() {
            let du = dist[u];
            // a cycle found from here has length >= 2*du + 1
            if 2 * du + 1 >= best {
                break;
            }
            let mut visit = |w: usize| -> bool {
                if dist[w] == UNSEEN {
                    dist[w] = du + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = du + dist[w] + 1;
                    if len < best {
                        best = len;
                    }
                    return true;
                }
                false
            };
            if u < nc {
                for v in h.row_support(u) {
                    if visit(nc + v) {
                        break 'bfs;
                    }
                }
            } else {
                for &c in h.col_support(u - nc) {
                    if visit(c) {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 4 {
            break;
        }
    }
    if best == u32::MAX {
        Distance::INFINITE
    } else {
        Distance(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[u64]]) -> SparseMatrix {
        let v: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        SparseMatrix::from_dense(&v, Some(2)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let m = dense(&[&[1]]);
        assert_eq!(check_variable_distance(&m, 0, 0), Distance::finite(1));

        let m = dense(&[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(check_variable_distance(&m, 0, 2), Distance::finite(3));

        let m = dense(&[&[1, 0], &[0, 1]]);
        assert_eq!(check_variable_distance(&m, 0, 1), Distance::INFINITE);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&dense(&[&[1; 8]])), Distance::INFINITE);
        assert_eq!(girth(&dense(&[&[1, 1], &[1, 1]])), Distance::finite(4));
        let h0 = dense(&[
            &[0, 0, 0, 1, 0, 1, 0, 0],
            &[1, 0, 0, 0, 0, 0, 1, 0],
            &[0, 1, 0, 0, 0, 0, 0, 1],
            &[0, 0, 1, 0, 1, 0, 0, 0],
        ]);
        assert_eq!(girth(&h0), Distance::INFINITE);
    }

    #[test]
    fn girth_of_a_six_cycle() {
        // checks c0-c1-c2 in a ring through variables v0, v1, v2
        let m = dense(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(girth(&m), Distance::finite(6));
    }

    #[test]
    fn distances_from_variable_with_early_stop() {
        let m = dense(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 0]]);
        let mut oracle = TannerDistanceOracle::for_matrix(&m);
        let mut out = Vec::new();
        oracle.distances_from_variable(&m, 0, None, &mut out);
        assert_eq!(
            out,
            vec![
                Distance::finite(1),
                Distance::finite(3),
                Distance::finite(5),
                Distance::finite(1)
            ]
        );
        oracle.distances_from_variable(&m, 0, Some(&[1]), &mut out);
        assert_eq!(out[1], Distance::finite(3));
        assert_eq!(out[2], Distance::INFINITE);
        assert_eq!(Distance::INFINITE.to_string(), "inf");
    }
}
