//! Maximum cardinality matching in general graphs (Edmonds' blossom
//! algorithm) and uncapacitated b-matching by vertex copies.

use crate::error::{Error, Result};
use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Maximum matching of a simple undirected graph on `n` vertices.
/// Returns `mate[v]` (or `None`).
pub fn max_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let mut b = Blossom {
        adj,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
    };
    // greedy start
    for v in 0..n {
        if b.mate[v] == NONE {
            if let Some(&u) = b.adj[v].iter().find(|&&u| b.mate[u] == NONE) {
                b.mate[v] = u;
                b.mate[u] = v;
            }
        }
    }
    for v in 0..n {
        if b.mate[v] == NONE {
            if let Some(mut u) = b.find_path(v) {
                while u != NONE {
                    let pv = b.parent[u];
                    let ppv = b.mate[pv];
                    b.mate[u] = pv;
                    b.mate[pv] = u;
                    u = ppv;
                }
            }
        }
    }
    b.mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
}

struct Blossom {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl Blossom {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Breadth-first search for an augmenting path from `root`; returns its
    /// free end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for k in 0..self.adj[v].len() {
                let to = self.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    queue.push_back(m);
                }
            }
        }
        None
    }
}

/// Uncapacitated b-matching: integer `x_e >= 0` on the edges with
/// `Σ_{e at v} x_e <= b(v)`; each edge may be taken repeatedly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatching {
    pub value: u64,
    /// `(edge index, multiplicity)` for edges taken at least once.
    pub picks: Vec<(usize, u64)>,
}

/// Reduces to maximum matching: vertex `v` becomes `b(v)` copies and every
/// edge `uv` joins all copies of `u` to all copies of `v`.
pub fn max_b_matching(b: &[u64], edges: &[(usize, usize)]) -> Result<BMatching> {
    for &(u, v) in edges {
        if u >= b.len() || v >= b.len() {
            return Err(Error::Precondition("b-matching edge refers to an unknown vertex".into()));
        }
        if u == v {
            return Err(Error::Precondition("b-matching graph has a loop".into()));
        }
    }
    let mut first = Vec::with_capacity(b.len());
    let mut total = 0usize;
    for &bv in b {
        first.push(total);
        total += bv as usize;
    }
    let mut copy_edges = Vec::new();
    let mut origin = Vec::new();
    for (k, &(u, v)) in edges.iter().enumerate() {
        for cu in 0..b[u] as usize {
            for cv in 0..b[v] as usize {
                copy_edges.push((first[u] + cu, first[v] + cv));
                origin.push(k);
            }
        }
    }
    let mate = max_matching(total, &copy_edges);
    // parallel input edges list the same copy pair; credit it to the first
    let mut credited = std::collections::HashSet::new();
    let mut counts = vec![0u64; edges.len()];
    for (i, &(a, c)) in copy_edges.iter().enumerate() {
        if mate[a] == Some(c) && credited.insert((a.min(c), a.max(c))) {
            counts[origin[i]] += 1;
        }
    }
    let picks: Vec<(usize, u64)> = counts.iter().enumerate().filter(|(_, c)| **c > 0).map(|(k, c)| (k, *c)).collect();
    let value = picks.iter().map(|(_, c)| c).sum();
    Ok(BMatching { value, picks })
}

/// Exhaustive b-matching value, for cross-checking small instances.
pub fn brute_b_matching(b: &[u64], edges: &[(usize, usize)]) -> u64 {
    fn go(k: usize, edges: &[(usize, usize)], left: &mut [u64]) -> u64 {
        if k == edges.len() {
            return 0;
        }
        let (u, v) = edges[k];
        let cap = left[u].min(left[v]);
        let mut best = 0;
        for x in 0..=cap {
            left[u] -= x;
            left[v] -= x;
            best = best.max(x + go(k + 1, edges, left));
            left[u] += x;
            left[v] += x;
        }
        best
    }
    let mut left = b.to_vec();
    go(0, edges, &mut left)
}
