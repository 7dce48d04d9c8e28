//! Switching, node splits and the 3/2-operation.

use super::{Multiflow, TPath};
use crate::error::{Error, Result};
use crate::network::{EdgeIx, Multigraph, Network, NodeIx};
use crate::rational::{self, Rational};
use num_traits::Zero;

/// The two recombinations of paths `P = P'xP''` and `Q = Q'xQ''` at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwitchVariant {
    /// `P'xQ'` and `P''xQ''`.
    Prefixes,
    /// `P'xQ''` and `Q'xP''`.
    Crossed,
}

impl SwitchVariant {
    pub const ALL: [SwitchVariant; 2] = [SwitchVariant::Prefixes, SwitchVariant::Crossed];

    pub fn from_index(i: u8) -> Option<SwitchVariant> {
        match i {
            1 => Some(SwitchVariant::Prefixes),
            2 => Some(SwitchVariant::Crossed),
            _ => None,
        }
    }
}

fn rev(edges: &[EdgeIx]) -> Vec<EdgeIx> {
    edges.iter().rev().copied().collect()
}

fn concat(a: &[EdgeIx], b: &[EdgeIx]) -> Vec<EdgeIx> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// The two walks produced by recombining `p` at position `i` with `q` at
/// position `j`, each with its start node.
pub(crate) fn recombine(p: &TPath, i: usize, q: &TPath, j: usize, variant: SwitchVariant) -> [(NodeIx, Vec<EdgeIx>); 2] {
    match variant {
        SwitchVariant::Prefixes => [
            (p.start(), concat(p.prefix_edges(i), &rev(q.prefix_edges(j)))),
            (p.end(), concat(&rev(p.suffix_edges(i)), q.suffix_edges(j))),
        ],
        SwitchVariant::Crossed => [
            (p.start(), concat(p.prefix_edges(i), q.suffix_edges(j))),
            (q.start(), concat(q.prefix_edges(j), p.suffix_edges(i))),
        ],
    }
}

/// Result of a switch: the new multiflow and the recombined paths in the
/// orientation the switch produced them. A recombined walk whose ends
/// coincide is not a T-path and is dropped (`None`).
#[derive(Debug, Clone)]
pub struct Switched {
    pub flow: Multiflow,
    pub paths: [Option<TPath>; 2],
}

/// Switches `p` and `q` at their positions `i` and `j`, which must hold the
/// same inner node. Both paths must belong to `f` with equal weights.
pub fn switch_at(
    net: &Network,
    f: &Multiflow,
    p: &TPath,
    i: usize,
    q: &TPath,
    j: usize,
    variant: SwitchVariant,
) -> Result<Switched> {
    if p.same_path(q) {
        return Err(Error::Precondition("cannot switch a path with itself".into()));
    }
    let (wp, wq) = (f.weight_of(p), f.weight_of(q));
    if wp.is_zero() || wq.is_zero() {
        return Err(Error::Precondition("both paths must belong to the multiflow".into()));
    }
    if wp != wq {
        return Err(Error::Precondition(format!(
            "switching needs equal weights, got {} and {}",
            rational::format(&wp),
            rational::format(&wq)
        )));
    }
    if !p.interior().contains(&i) || !q.interior().contains(&j) || p.nodes()[i] != q.nodes()[j] {
        return Err(Error::Precondition("switch node must lie strictly inside both paths".into()));
    }
    let x = p.nodes()[i];
    if net.is_terminal(x) {
        return Err(Error::Precondition(format!("{:?} is a terminal", net.graph().name(x))));
    }
    let mut flow = f.clone();
    flow.add(p.clone(), -wp);
    flow.add(q.clone(), -wq);
    let mut out: [Option<TPath>; 2] = [None, None];
    for (slot, (start, edges)) in out.iter_mut().zip(recombine(p, i, q, j, variant)) {
        let walk = TPath::walk(net.graph(), start, edges)
            .map_err(|e| Error::Precondition(format!("recombined walk is not edge-simple: {e}")))?;
        if walk.start() != walk.end() {
            flow.add(walk.clone(), wp);
            *slot = Some(walk);
        }
    }
    Ok(Switched { flow, paths: out })
}

/// Switches at the first interior occurrence of `x` on each path.
pub fn switch(net: &Network, f: &Multiflow, p: &TPath, q: &TPath, x: NodeIx, variant: SwitchVariant) -> Result<Switched> {
    let name = || net.graph().name(x).to_string();
    let i = *p
        .interior_positions_of(x)
        .first()
        .ok_or_else(|| Error::Precondition(format!("first path does not pass through {:?}", name())))?;
    let j = *q
        .interior_positions_of(x)
        .first()
        .ok_or_else(|| Error::Precondition(format!("second path does not pass through {:?}", name())))?;
    switch_at(net, f, p, i, q, j, variant)
}

/// A perfect pairing of the four edges at a degree-4 node.
pub type Pairing = [[EdgeIx; 2]; 2];

/// The three pairings of the edges incident to a degree-4 node.
pub fn pairings(net: &Network, x: NodeIx) -> Result<Vec<Pairing>> {
    check_splittable(net, x)?;
    let [a, b, c, d] = <[EdgeIx; 4]>::try_from(net.graph().incident(x)).unwrap();
    Ok(vec![[[a, b], [c, d]], [[a, c], [b, d]], [[a, d], [b, c]]])
}

fn check_splittable(net: &Network, x: NodeIx) -> Result<()> {
    let g = net.graph();
    if x >= g.node_count() {
        return Err(Error::Precondition(format!("node index {x} out of range")));
    }
    if net.is_terminal(x) {
        return Err(Error::Precondition(format!("cannot split terminal {:?}", g.name(x))));
    }
    if g.degree(x) != 4 {
        return Err(Error::Precondition(format!(
            "only degree-4 nodes can be split, {:?} has degree {}",
            g.name(x),
            g.degree(x)
        )));
    }
    Ok(())
}

fn check_pairing(g: &Multigraph, x: NodeIx, pairing: &Pairing) -> Result<()> {
    let mut used: Vec<EdgeIx> = pairing.iter().flatten().copied().collect();
    used.sort_unstable();
    let mut inc = g.incident(x).to_vec();
    inc.sort_unstable();
    if used != inc {
        return Err(Error::Precondition(format!(
            "pairing must partition the four edges at {:?}",
            g.name(x)
        )));
    }
    Ok(())
}

/// The network after a split, with the provenance of every joined edge.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub network: Network,
    /// Removed node name.
    pub node: String,
    /// `(new edge id, first old id, second old id)`.
    pub joined: Vec<(String, String, String)>,
    /// Pairs whose edges both led to the same neighbour; joining them would
    /// make a loop, so they disappear.
    pub dropped: Vec<(String, String)>,
}

/// Removes inner node `x` of degree 4 and joins its edges two by two.
/// Neighbour degrees and the Eulerian property are unchanged (a dropped
/// loop lowers its node's degree by two).
pub fn split_node(net: &Network, x: NodeIx, pairing: &Pairing) -> Result<SplitOutcome> {
    check_splittable(net, x)?;
    let g = net.graph();
    check_pairing(g, x, pairing)?;
    let mut triples: Vec<(String, String, String)> = g
        .edges()
        .iter()
        .filter(|e| !e.touches(x))
        .map(|e| (e.id.clone(), g.name(e.ends[0]).to_string(), g.name(e.ends[1]).to_string()))
        .collect();
    let mut joined = Vec::new();
    let mut dropped = Vec::new();
    for pair in pairing {
        let (e1, e2) = (g.edge(pair[0]), g.edge(pair[1]));
        let (a, b) = (e1.other(x), e2.other(x));
        let (id1, id2) = if e1.id <= e2.id { (&e1.id, &e2.id) } else { (&e2.id, &e1.id) };
        if a == b {
            dropped.push((id1.clone(), id2.clone()));
            continue;
        }
        let mut id = format!("{id1}+{id2}");
        while g.edge_by_id(&id).is_some() || joined.iter().any(|(j, _, _)| j == &id) {
            id.push('\'');
        }
        triples.push((id.clone(), g.name(a).to_string(), g.name(b).to_string()));
        joined.push((id, id1.clone(), id2.clone()));
    }
    let nodes: Vec<String> = (0..g.node_count()).filter(|&v| v != x).map(|v| g.name(v).to_string()).collect();
    let graph = Multigraph::new(nodes, triples)?;
    let network = Network::new(graph, &net.terminal_names(), &net.clutter_names())?;
    Ok(SplitOutcome { network, node: g.name(x).to_string(), joined, dropped })
}

/// Every pass of a path through `x` uses one of the pairing's edge pairs.
pub fn preserves_paths(net: &Network, f: &Multiflow, x: NodeIx, pairing: &Pairing) -> bool {
    let _ = net;
    let paired = |a: EdgeIx, b: EdgeIx| pairing.iter().any(|p| (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a));
    f.paths().iter().all(|fp| {
        let p = &fp.path;
        p.interior()
            .filter(|&i| p.nodes()[i] == x)
            .all(|i| paired(p.edges()[i - 1], p.edges()[i]))
    })
}

/// Splits `x` so that the paths of `f` survive (an h-split) and re-embeds
/// them in the split network.
pub fn split_multiflow(net: &Network, f: &Multiflow, x: NodeIx, pairing: &Pairing) -> Result<(SplitOutcome, Multiflow)> {
    let outcome = split_node(net, x, pairing)?;
    if !preserves_paths(net, f, x, pairing) {
        return Err(Error::Precondition("the pairing does not preserve the paths of the multiflow".into()));
    }
    let g = net.graph();
    let ng = outcome.network.graph();
    let joined_id = |a: EdgeIx, b: EdgeIx| -> Option<&str> {
        let (ia, ib) = (&g.edge(a).id, &g.edge(b).id);
        outcome
            .joined
            .iter()
            .find(|(_, p, q)| (p == ia && q == ib) || (p == ib && q == ia))
            .map(|(id, _, _)| id.as_str())
    };
    let mut parts = Vec::with_capacity(f.len());
    for fp in f.paths() {
        let p = &fp.path;
        let mut edges = Vec::with_capacity(p.len());
        let mut k = 0;
        while k < p.len() {
            let e = p.edges()[k];
            if p.nodes()[k + 1] == x {
                let id = joined_id(e, p.edges()[k + 1]).ok_or_else(|| {
                    Error::Precondition("a path uses an edge pair that the split turns into a loop".into())
                })?;
                edges.push(ng.edge_by_id(id).unwrap());
                k += 2;
            } else {
                edges.push(ng.edge_by_id(&g.edge(e).id).unwrap());
                k += 1;
            }
        }
        let start = ng.node(g.name(p.start())).unwrap();
        parts.push((TPath::from_edges(&outcome.network, start, edges)?, fp.weight));
    }
    let h = Multiflow::new(&outcome.network, parts)?;
    Ok((outcome, h))
}

/// Maps a multiflow of the split network back into the original network by
/// routing every joined edge through the removed node again.
pub fn restore_split(net: &Network, outcome: &SplitOutcome, h: &Multiflow) -> Result<Multiflow> {
    let g = net.graph();
    let ng = outcome.network.graph();
    let mut parts = Vec::with_capacity(h.len());
    for fp in h.paths() {
        let p = &fp.path;
        let mut cur = g.require_node(ng.name(p.start()))?;
        let start = cur;
        let mut edges = Vec::new();
        for &e in p.edges() {
            let id = &ng.edge(e).id;
            match outcome.joined.iter().find(|(j, _, _)| j == id) {
                Some((_, a, b)) => {
                    let (ea, eb) = (g.edge_by_id(a).unwrap(), g.edge_by_id(b).unwrap());
                    let (first, second) = if g.edge(ea).touches(cur) { (ea, eb) } else { (eb, ea) };
                    edges.push(first);
                    edges.push(second);
                    cur = g.edge(second).other(g.edge(first).other(cur));
                }
                None => {
                    let oe = g
                        .edge_by_id(id)
                        .ok_or_else(|| Error::InvalidMultiflow(format!("unknown edge {id:?}")))?;
                    edges.push(oe);
                    cur = g.edge(oe).other(cur);
                }
            }
        }
        parts.push((TPath::from_edges(net, start, edges)?, fp.weight));
    }
    Multiflow::new(net, parts)
}

/// The 3/2-operation on an `(s',t')`-path `p0` of weight α and a
/// `(q',r')`-path `p1` of weight β meeting at inner node `x0`: they are
/// replaced by `(t',r')`, `(t',q')`, `(q',r')` and `(s',t')` paths of weights
/// ε/2, ε/2, β − ε/2 and α − ε. The orientations of `p0` and `p1` fix which
/// ends play the roles of s', t', q', r'.
pub fn three_halves(net: &Network, f: &Multiflow, p0: &TPath, p1: &TPath, x0: NodeIx, eps: Rational) -> Result<Multiflow> {
    if p0.same_path(p1) {
        return Err(Error::Precondition("the two paths must differ".into()));
    }
    let alpha = f.weight_of(p0);
    let beta = f.weight_of(p1);
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::Precondition("both paths must belong to the multiflow".into()));
    }
    let bound = alpha.min(beta * Rational::from_integer(2));
    if eps <= Rational::zero() || eps > bound {
        return Err(Error::Precondition(format!(
            "epsilon {} outside (0, {}]",
            rational::format(&eps),
            rational::format(&bound)
        )));
    }
    if net.is_terminal(x0) {
        return Err(Error::Precondition(format!("{:?} is a terminal", net.graph().name(x0))));
    }
    let i = *p0
        .interior_positions_of(x0)
        .first()
        .ok_or_else(|| Error::Precondition("first path misses the shared node".into()))?;
    let j = *p1
        .interior_positions_of(x0)
        .first()
        .ok_or_else(|| Error::Precondition("second path misses the shared node".into()))?;
    let tail = rev(p0.suffix_edges(i));
    let g = net.graph();
    let tr = TPath::walk(g, p0.end(), concat(&tail, p1.suffix_edges(j)))?;
    let tq = TPath::walk(g, p0.end(), concat(&tail, &rev(p1.prefix_edges(j))))?;
    for w in [&tr, &tq] {
        if w.start() == w.end() {
            return Err(Error::Precondition("the two paths must have four distinct ends".into()));
        }
    }
    let half_eps = eps * rational::half();
    let mut out = f.clone();
    out.add(p0.clone(), -eps);
    out.add(p1.clone(), -half_eps);
    out.add(tr, half_eps);
    out.add(tq, half_eps);
    out.check_capacity(net)?;
    Ok(out)
}
