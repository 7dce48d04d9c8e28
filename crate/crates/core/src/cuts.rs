//! Unit-capacity max-flow / min-cut and the cut quantities built on it.

use crate::error::{Error, Result};
use crate::network::{EdgeIx, Multigraph, Network, NodeIx};
use crate::rational::Rational;
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub value: usize,
    pub cut_edges: Vec<EdgeIx>,
    pub source_side: Vec<NodeIx>,
}

struct Arc {
    to: usize,
    cap: u32,
}

/// Maximum number of edge-disjoint paths from `sources` to `sinks`, each
/// parallel edge carrying one unit, together with a minimum cut witness.
/// Augmenting paths are searched breadth-first in edge-id order.
pub fn max_flow(graph: &Multigraph, sources: &[NodeIx], sinks: &[NodeIx]) -> Result<CutResult> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::InvalidFlow("source and sink sets must be non-empty".into()));
    }
    let n = graph.node_count();
    let mut side = vec![0u8; n];
    for &s in sources {
        if s >= n {
            return Err(Error::InvalidFlow(format!("source index {s} out of range")));
        }
        side[s] = 1;
    }
    for &t in sinks {
        if t >= n {
            return Err(Error::InvalidFlow(format!("sink index {t} out of range")));
        }
        if side[t] == 1 {
            return Err(Error::InvalidFlow(format!(
                "node {:?} is both source and sink",
                graph.name(t)
            )));
        }
        side[t] = 2;
    }

    let src = n;
    let dst = n + 1;
    let big = graph.edge_count() as u32 + 1;
    let mut arcs: Vec<Arc> = Vec::with_capacity(2 * graph.edge_count() + 2 * n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    let add = |arcs: &mut Vec<Arc>, adj: &mut Vec<Vec<usize>>, u: usize, v: usize, c: u32, back: u32| {
        adj[u].push(arcs.len());
        arcs.push(Arc { to: v, cap: c });
        adj[v].push(arcs.len());
        arcs.push(Arc { to: u, cap: back });
    };
    for v in 0..n {
        match side[v] {
            1 => add(&mut arcs, &mut adj, src, v, big, 0),
            2 => add(&mut arcs, &mut adj, v, dst, big, 0),
            _ => {}
        }
    }
    for e in graph.edges() {
        add(&mut arcs, &mut adj, e.ends[0], e.ends[1], 1, 1);
    }

    let mut value = 0usize;
    let mut pred = vec![usize::MAX; n + 2];
    loop {
        pred.iter_mut().for_each(|p| *p = usize::MAX);
        let mut seen = vec![false; n + 2];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == dst {
                break;
            }
            for &a in &adj[u] {
                let w = arcs[a].to;
                if arcs[a].cap > 0 && !seen[w] {
                    seen[w] = true;
                    pred[w] = a;
                    queue.push_back(w);
                }
            }
        }
        if !seen[dst] {
            let source_side: Vec<NodeIx> = (0..n).filter(|&v| seen[v]).collect();
            let cut_edges: Vec<EdgeIx> = graph
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| seen[e.ends[0]] != seen[e.ends[1]])
                .map(|(i, _)| i)
                .collect();
            debug_assert_eq!(cut_edges.len(), value);
            return Ok(CutResult { value, cut_edges, source_side });
        }
        let mut v = dst;
        while v != src {
            let a = pred[v];
            arcs[a].cap -= 1;
            arcs[a ^ 1].cap += 1;
            v = arcs[a ^ 1].to;
        }
        value += 1;
    }
}

fn check_terminal_subset(net: &Network, set: &[NodeIx]) -> Result<Vec<NodeIx>> {
    let mut a = set.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() {
        return Err(Error::InvalidSubset("terminal subset is empty".into()));
    }
    for &t in &a {
        if t >= net.graph().node_count() || !net.is_terminal(t) {
            return Err(Error::InvalidSubset(format!("index {t} is not a terminal")));
        }
    }
    if a.len() == net.terminals().len() {
        return Err(Error::InvalidSubset("terminal subset equals the whole terminal set".into()));
    }
    Ok(a)
}

/// Complement of `a` within the terminal set.
pub fn complement(net: &Network, a: &[NodeIx]) -> Vec<NodeIx> {
    net.terminals().iter().copied().filter(|t| !a.contains(t)).collect()
}

/// Size of a minimum `(A, T∖A)` cut.
pub fn lambda(net: &Network, a: &[NodeIx]) -> Result<usize> {
    let a = check_terminal_subset(net, a)?;
    let rest = complement(net, &a);
    Ok(max_flow(net.graph(), &a, &rest)?.value)
}

/// `½(Σ_{t∈A} λ(t) − λ(A))`, exact.
pub fn beta(net: &Network, a: &[NodeIx]) -> Result<Rational> {
    let a = check_terminal_subset(net, a)?;
    let mut total: i128 = 0;
    for &t in &a {
        total += lambda(net, &[t])? as i128;
    }
    total -= lambda(net, &a)? as i128;
    Ok(Rational::new(total, 2))
}

/// Number of edges with exactly one end in `x`.
pub fn cut_degree(graph: &Multigraph, x: &[NodeIx]) -> Result<usize> {
    let n = graph.node_count();
    let mut inside = vec![false; n];
    for &v in x {
        if v >= n {
            return Err(Error::InvalidSubset(format!("node index {v} out of range")));
        }
        inside[v] = true;
    }
    let count = inside.iter().filter(|b| **b).count();
    if count == 0 || count == n {
        return Err(Error::InvalidSubset("cut side must be a non-empty proper subset".into()));
    }
    Ok(graph.edges().iter().filter(|e| inside[e.ends[0]] != inside[e.ends[1]]).count())
}
