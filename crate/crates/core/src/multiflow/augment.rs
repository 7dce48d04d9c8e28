//! Augmenting sequences, tridents and the switches that connect them.

use super::ops::{switch_at, SwitchVariant};
use super::{max_multiflow_size, Multiflow, TPath};
use crate::cuts::lambda;
use crate::error::{Error, Result};
use crate::network::{EdgeIx, Network, NodeIx};
use std::collections::VecDeque;

/// `P_0, x_0, P_1, ..., x_{n-1}, P_n`. `P_0` is an A-path, `P_n` an
/// A^c-path and the paths in between join A to A^c. Intermediate paths are
/// oriented with their A-end first, so `x_i` sits before `x_{i-1}` on `P_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentingSequence {
    pub paths: Vec<TPath>,
    pub nodes: Vec<NodeIx>,
    /// `(position of x_i on P_i, position of x_i on P_{i+1})`.
    pub positions: Vec<(usize, usize)>,
}

impl AugmentingSequence {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Checks the defining conditions against `a`.
    pub fn is_valid(&self, net: &Network, a: &[NodeIx]) -> bool {
        let n = self.nodes.len();
        if n == 0 || self.paths.len() != n + 1 || self.positions.len() != n {
            return false;
        }
        let kind = |p: &TPath| side(a, p);
        if kind(&self.paths[0]) != Side::Inside || kind(&self.paths[n]) != Side::Outside {
            return false;
        }
        for p in &self.paths[1..n] {
            if kind(p) != Side::Across || !a.contains(&p.start()) {
                return false;
            }
        }
        for i in 0..n {
            let (pi, pj) = self.positions[i];
            let x = self.nodes[i];
            if net.is_terminal(x)
                || !self.paths[i].interior().contains(&pi)
                || !self.paths[i + 1].interior().contains(&pj)
                || self.paths[i].nodes()[pi] != x
                || self.paths[i + 1].nodes()[pj] != x
                || self.paths[i].same_path(&self.paths[i + 1])
            {
                return false;
            }
            if i > 0 && pi >= self.positions[i - 1].1 {
                return false;
            }
        }
        true
    }

    pub fn display(&self, net: &Network) -> String {
        let g = net.graph();
        let mut parts = Vec::new();
        for (i, p) in self.paths.iter().enumerate() {
            parts.push(format!("[{}]", p.display(g)));
            if i < self.nodes.len() {
                parts.push(g.name(self.nodes[i]).to_string());
            }
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Inside,
    Outside,
    Across,
}

fn side(a: &[NodeIx], p: &TPath) -> Side {
    match (a.contains(&p.start()), a.contains(&p.end())) {
        (true, true) => Side::Inside,
        (false, false) => Side::Outside,
        _ => Side::Across,
    }
}

fn check_maximum_covering(net: &Network, f: &Multiflow) -> Result<()> {
    if !f.is_integer() {
        return Err(Error::Precondition("augmenting sequences need an integer multiflow".into()));
    }
    let want = max_multiflow_size(net)?;
    if f.size() != want {
        return Err(Error::Precondition(format!(
            "multiflow is not maximum: size {}, maximum {}",
            f.size(),
            want
        )));
    }
    let usage = f.edge_usage(net.graph());
    if let Some(e) = usage.iter().position(|u| *u == num_traits::Zero::zero()) {
        return Err(Error::Precondition(format!(
            "edge {:?} is not traversed by the multiflow",
            net.graph().edge(e).id
        )));
    }
    Ok(())
}

/// Breadth-first search for an augmenting sequence of `a` in hat(f). The
/// multiflow must be a maximum integer multiflow traversing every edge;
/// violations are reported as precondition errors before any search.
/// Returns `None` exactly when no sequence exists.
pub fn find_augmenting_sequence(net: &Network, f: &Multiflow, a: &[NodeIx]) -> Result<Option<AugmentingSequence>> {
    lambda(net, a)?;
    check_maximum_covering(net, f)?;
    let h = f.hat(net);
    let paths: Vec<TPath> = h
        .paths()
        .iter()
        .map(|fp| {
            let p = &fp.path;
            if side(a, p) == Side::Across && !a.contains(&p.start()) {
                p.reversed()
            } else {
                p.clone()
            }
        })
        .collect();
    let sides: Vec<Side> = paths.iter().map(|p| side(a, p)).collect();
    let n = net.graph().node_count();
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, p) in paths.iter().enumerate() {
        for i in p.interior() {
            let v = p.nodes()[i];
            if !net.is_terminal(v) {
                occurrences[v].push((k, i));
            }
        }
    }

    // chosen states: (path, position of the next link node); parent holds
    // (previous chosen state, entry position on this path)
    let offsets: Vec<usize> = paths
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.nodes().len();
            Some(o)
        })
        .collect();
    let total: usize = paths.iter().map(|p| p.nodes().len()).sum();
    let id = |k: usize, i: usize| offsets[k] + i;
    let mut parent: Vec<Option<(Option<(usize, usize)>, usize)>> = vec![None; total];
    let mut queue = VecDeque::new();
    for (k, p) in paths.iter().enumerate() {
        if sides[k] != Side::Inside {
            continue;
        }
        for i in p.interior() {
            if !net.is_terminal(p.nodes()[i]) && parent[id(k, i)].is_none() {
                parent[id(k, i)] = Some((None, 0));
                queue.push_back((k, i));
            }
        }
    }
    while let Some((k, i)) = queue.pop_front() {
        let x = paths[k].nodes()[i];
        for &(k2, j) in &occurrences[x] {
            if k2 == k {
                continue;
            }
            match sides[k2] {
                Side::Outside => {
                    return Ok(Some(rebuild(&paths, &parent, &offsets, (k, i), (k2, j))));
                }
                Side::Across => {
                    for q in 1..j {
                        let v = paths[k2].nodes()[q];
                        if !net.is_terminal(v) && parent[id(k2, q)].is_none() {
                            parent[id(k2, q)] = Some((Some((k, i)), j));
                            queue.push_back((k2, q));
                        }
                    }
                }
                Side::Inside => {}
            }
        }
    }
    Ok(None)
}

type Parent = Option<(Option<(usize, usize)>, usize)>;

fn rebuild(
    paths: &[TPath],
    parent: &[Parent],
    offsets: &[usize],
    last: (usize, usize),
    end: (usize, usize),
) -> AugmentingSequence {
    // walk back from the final chosen state
    let mut chain = vec![];
    let mut cur = Some(last);
    while let Some((k, i)) = cur {
        let (prev, entry) = parent[offsets[k] + i].unwrap();
        chain.push((k, i, entry));
        cur = prev;
    }
    chain.reverse();
    let mut seq_paths = Vec::with_capacity(chain.len() + 1);
    let mut nodes = Vec::with_capacity(chain.len());
    let mut positions = Vec::with_capacity(chain.len());
    for (idx, &(k, i, _)) in chain.iter().enumerate() {
        seq_paths.push(paths[k].clone());
        nodes.push(paths[k].nodes()[i]);
        let next_entry = if idx + 1 < chain.len() { chain[idx + 1].2 } else { end.1 };
        positions.push((i, next_entry));
    }
    seq_paths.push(paths[end.0].clone());
    AugmentingSequence { paths: seq_paths, nodes, positions }
}

/// Outcome of turning an augmenting sequence into a cross.
#[derive(Debug, Clone)]
pub struct CrossOutcome {
    pub flow: Multiflow,
    /// A-path through the pivot.
    pub inside: TPath,
    /// A^c-path through the pivot.
    pub outside: TPath,
    pub pivot: NodeIx,
}

/// Switches `P_0, ..., P_{n-1}` at `x_0, ..., x_{n-2}` so that an A-path
/// and the A^c-path `P_n` cross at `x_{n-1}`. At each step the switch that
/// keeps an A-path through the next link node and does not lower Θ is taken;
/// if neither variant qualifies a theorem-violation diagnostic is returned.
pub fn cross_from_augmenting_sequence(
    net: &Network,
    f: &Multiflow,
    a: &[NodeIx],
    seq: &AugmentingSequence,
) -> Result<CrossOutcome> {
    if !seq.is_valid(net, a) {
        return Err(Error::Precondition("not an augmenting sequence for this set".into()));
    }
    let n = seq.nodes.len();
    for i in 0..=n {
        for j in i + 1..=n {
            if seq.paths[i].same_path(&seq.paths[j]) {
                return Err(Error::Precondition("augmenting sequence visits a path twice".into()));
            }
        }
    }
    let mut flow = f.hat(net);
    let mut cur = seq.paths[0].clone();
    let mut cur_pos = seq.positions[0].0;
    for i in 0..n - 1 {
        let next = &seq.paths[i + 1];
        let entry = seq.positions[i].1;
        let target = seq.positions[i + 1].0;
        let theta = flow.theta(net);
        let mut chosen = None;
        for variant in SwitchVariant::ALL {
            let switched = switch_at(net, &flow, &cur, cur_pos, next, entry, variant)?;
            // position of x_{i+1} on the new A-path, if the variant yields one
            let candidate = match variant {
                SwitchVariant::Prefixes => switched.paths[0].clone().map(|p| (p, cur_pos + (entry - target))),
                SwitchVariant::Crossed => switched.paths[1].clone().map(|p| (p, target)),
            };
            if let Some((p, pos)) = candidate {
                if side(a, &p) == Side::Inside && p.nodes()[pos] == seq.nodes[i + 1] && switched.flow.theta(net) >= theta {
                    chosen = Some((switched.flow, p, pos));
                    break;
                }
            }
        }
        let (nf, np, npos) = chosen.ok_or_else(|| {
            Error::TheoremViolation(format!(
                "no switch at {:?} keeps Θ while passing the sequence on",
                net.graph().name(seq.nodes[i])
            ))
        })?;
        flow = nf;
        cur = np;
        cur_pos = npos;
    }
    Ok(CrossOutcome { flow, inside: cur, outside: seq.paths[n].clone(), pivot: seq.nodes[n - 1] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TridentKind {
    /// An A-path and an A^c-path for a clutter member A.
    Ordinary,
    /// Paths of two distinct clutter members sharing exactly one end.
    Simple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trident {
    pub first: TPath,
    pub second: TPath,
    pub pivot: NodeIx,
    pub kind: TridentKind,
}

/// Every pair of paths of `f` meeting at an inner node in a trident
/// pattern, one entry per pair and shared inner node.
pub fn detect_tridents(net: &Network, f: &Multiflow) -> Vec<Trident> {
    let members = net.clutter().members();
    let covered = |p: &TPath, m: &[NodeIx]| m.contains(&p.start()) && m.contains(&p.end());
    let disjoint = |p: &TPath, m: &[NodeIx]| !m.contains(&p.start()) && !m.contains(&p.end());
    let mut out = Vec::new();
    let paths = f.paths();
    for (i, fp) in paths.iter().enumerate() {
        for fq in &paths[i + 1..] {
            let (p, q) = (&fp.path, &fq.path);
            let mut shared: Vec<NodeIx> = p
                .interior()
                .map(|k| p.nodes()[k])
                .filter(|&v| !net.is_terminal(v) && q.passes_through(v))
                .collect();
            shared.sort_unstable();
            shared.dedup();
            if shared.is_empty() {
                continue;
            }
            let pattern = if members.iter().any(|m| covered(p, m) && disjoint(q, m)) {
                Some((TridentKind::Ordinary, p, q))
            } else if members.iter().any(|m| covered(q, m) && disjoint(p, m)) {
                Some((TridentKind::Ordinary, q, p))
            } else {
                let (ps, qs) = (p.ends(), q.ends());
                let common = [ps.0, ps.1].iter().filter(|&&v| v == qs.0 || v == qs.1).count();
                let two_members = members.iter().enumerate().any(|(ia, ma)| {
                    covered(p, ma) && members.iter().enumerate().any(|(ib, mb)| ib != ia && covered(q, mb))
                });
                (common == 1 && two_members).then_some((TridentKind::Simple, p, q))
            };
            if let Some((kind, first, second)) = pattern {
                for x in shared {
                    out.push(Trident { first: first.clone(), second: second.clone(), pivot: x, kind });
                }
            }
        }
    }
    out
}

/// Splices the closed trails formed by unused edges into paths touching
/// them, so that the multiflow traverses every edge it can reach. Returns the
/// new multiflow and the unused edges that touch no path. Fails if the unused
/// edges do not split into closed trails, which cannot happen for a maximum
/// integer multiflow in an inner-Eulerian network.
pub fn absorb_unused_edges(net: &Network, f: &Multiflow) -> Result<(Multiflow, Vec<EdgeIx>)> {
    if !f.is_integer() {
        return Err(Error::Precondition("only integer multiflows can absorb edges".into()));
    }
    let g = net.graph();
    let mut used = vec![false; g.edge_count()];
    let mut paths: Vec<TPath> = f.paths().iter().map(|fp| fp.path.clone()).collect();
    for p in &paths {
        for &e in p.edges() {
            used[e] = true;
        }
    }
    loop {
        let mut spliced = false;
        'search: for k in 0..paths.len() {
            for pos in 0..paths[k].nodes().len() {
                let v = paths[k].nodes()[pos];
                if !g.incident(v).iter().any(|&e| !used[e]) {
                    continue;
                }
                let trail = closed_trail(net, v, &mut used)?;
                let p = &paths[k];
                let mut edges = p.prefix_edges(pos).to_vec();
                edges.extend(trail);
                edges.extend_from_slice(p.suffix_edges(pos));
                paths[k] = TPath::walk(g, p.start(), edges)?;
                spliced = true;
                break 'search;
            }
        }
        if !spliced {
            break;
        }
    }
    let rest: Vec<EdgeIx> = (0..g.edge_count()).filter(|&e| !used[e]).collect();
    Ok((Multiflow::integer(net, paths)?, rest))
}

fn closed_trail(net: &Network, start: NodeIx, used: &mut [bool]) -> Result<Vec<EdgeIx>> {
    let g = net.graph();
    let mut trail = Vec::new();
    let mut cur = start;
    loop {
        match g.incident(cur).iter().copied().find(|&e| !used[e]) {
            Some(e) => {
                used[e] = true;
                trail.push(e);
                cur = g.edge(e).other(cur);
                if cur == start && !g.incident(start).iter().any(|&e| !used[e]) {
                    return Ok(trail);
                }
                if cur == start {
                    // keep extending through start; the trail stays closed
                    continue;
                }
            }
            None if cur == start => return Ok(trail),
            None => {
                return Err(Error::Precondition(format!(
                    "unused edges end at {:?}; the multiflow is not maximum",
                    g.name(cur)
                )))
            }
        }
    }
}
