//! T-paths, weighted multiflows and the counters built from their end-pairs.

mod augment;
mod ops;

pub use augment::{
    absorb_unused_edges, cross_from_augmenting_sequence, detect_tridents, find_augmenting_sequence,
    AugmentingSequence, CrossOutcome, Trident, TridentKind,
};
pub use ops::{
    pairings, preserves_paths, restore_split, split_multiflow, split_node, switch, switch_at, three_halves,
    Pairing, SplitOutcome, SwitchVariant, Switched,
};

use crate::cuts::lambda;
use crate::error::{Error, Result};
use crate::network::{EdgeIx, Multigraph, Network, NodeIx, PairClass};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// An edge-simple walk between two distinct terminals. Node repeats are
/// allowed; the orientation is kept as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TPath {
    nodes: Vec<NodeIx>,
    edges: Vec<EdgeIx>,
}

impl TPath {
    /// Walk starting at `start` along `edges`.
    pub fn from_edges(net: &Network, start: NodeIx, edges: Vec<EdgeIx>) -> Result<TPath> {
        let p = TPath::walk(net.graph(), start, edges)?;
        p.check_ends(net)?;
        Ok(p)
    }

    /// Path along named nodes; between consecutive nodes the lowest unused
    /// parallel edge is taken.
    pub fn from_node_names(net: &Network, names: &[&str]) -> Result<TPath> {
        TPath::from_node_names_avoiding(net, names, &[])
    }

    /// As [`TPath::from_node_names`], never taking an edge in `taken`.
    pub fn from_node_names_avoiding(net: &Network, names: &[&str], taken: &[EdgeIx]) -> Result<TPath> {
        let g = net.graph();
        if names.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two nodes".into()));
        }
        let nodes: Vec<NodeIx> = names.iter().map(|n| g.require_node(n)).collect::<Result<_>>()?;
        let mut edges = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            let e = g
                .incident(w[0])
                .iter()
                .copied()
                .find(|&e| g.edge(e).other(w[0]) == w[1] && !edges.contains(&e) && !taken.contains(&e))
                .ok_or_else(|| {
                    Error::InvalidPath(format!("no free edge between {:?} and {:?}", g.name(w[0]), g.name(w[1])))
                })?;
            edges.push(e);
        }
        TPath::from_edges(net, nodes[0], edges)
    }

    /// Builds a walk without checking its ends.
    pub(crate) fn walk(g: &Multigraph, start: NodeIx, edges: Vec<EdgeIx>) -> Result<TPath> {
        if edges.is_empty() {
            return Err(Error::InvalidPath("a path needs at least one edge".into()));
        }
        let mut nodes = Vec::with_capacity(edges.len() + 1);
        nodes.push(start);
        let mut cur = start;
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(Error::InvalidPath(format!("edge index {e} out of range")));
            }
            let edge = g.edge(e);
            if !edge.touches(cur) {
                return Err(Error::InvalidPath(format!(
                    "edge {:?} does not continue the walk at {:?}",
                    edge.id,
                    g.name(cur)
                )));
            }
            cur = edge.other(cur);
            nodes.push(cur);
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath("walk repeats an edge".into()));
        }
        Ok(TPath { nodes, edges })
    }

    fn check_ends(&self, net: &Network) -> Result<()> {
        let (s, t) = (self.start(), self.end());
        if !net.is_terminal(s) || !net.is_terminal(t) {
            return Err(Error::InvalidPath("both ends of a T-path must be terminals".into()));
        }
        if s == t {
            return Err(Error::InvalidPath(format!(
                "closed walk at {:?} is not a T-path",
                net.graph().name(s)
            )));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[NodeIx] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeIx] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> NodeIx {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeIx {
        *self.nodes.last().unwrap()
    }

    /// End pair in ascending order.
    pub fn ends(&self) -> (NodeIx, NodeIx) {
        let (a, b) = (self.start(), self.end());
        (a.min(b), a.max(b))
    }

    pub fn reversed(&self) -> TPath {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        let mut edges = self.edges.clone();
        edges.reverse();
        TPath { nodes, edges }
    }

    /// Orientation-independent representative.
    pub fn canonical(&self) -> TPath {
        let r = self.reversed();
        if (&r.nodes, &r.edges) < (&self.nodes, &self.edges) {
            r
        } else {
            self.clone()
        }
    }

    pub fn same_path(&self, other: &TPath) -> bool {
        self == other || *self == other.reversed()
    }

    /// Positions strictly inside the walk.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.nodes.len() - 1
    }

    pub fn interior_positions_of(&self, x: NodeIx) -> Vec<usize> {
        self.interior().filter(|&i| self.nodes[i] == x).collect()
    }

    pub fn passes_through(&self, x: NodeIx) -> bool {
        self.interior().any(|i| self.nodes[i] == x)
    }

    /// Some terminal occurs strictly inside.
    pub fn is_compound(&self, net: &Network) -> bool {
        self.interior().any(|i| net.is_terminal(self.nodes[i]))
    }

    pub fn class(&self, net: &Network) -> PairClass {
        net.class_of(self.start(), self.end())
    }

    /// Prefix ending at position `i` (inclusive).
    pub(crate) fn prefix_edges(&self, i: usize) -> &[EdgeIx] {
        &self.edges[..i]
    }

    /// Suffix starting at position `i`.
    pub(crate) fn suffix_edges(&self, i: usize) -> &[EdgeIx] {
        &self.edges[i..]
    }

    pub fn display(&self, g: &Multigraph) -> String {
        self.nodes.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join("-")
    }

    pub fn edge_ids(&self, g: &Multigraph) -> Vec<String> {
        self.edges.iter().map(|&e| g.edge(e).id.clone()).collect()
    }
}

impl PartialOrd for TPath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TPath {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.nodes, &self.edges).cmp(&(&other.nodes, &other.edges))
    }
}

/// One weighted path of a multiflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    pub path: TPath,
    pub weight: Rational,
}

/// Weighted T-paths, at most one unit of weight per edge. Identical paths
/// (up to orientation) are merged; zero weights are never stored. Paths are
/// kept sorted by their canonical form, each in the orientation it was
/// first inserted with.
#[derive(Debug, Clone, Default)]
pub struct Multiflow {
    paths: Vec<FlowPath>,
    keys: Vec<TPath>,
}

impl PartialEq for Multiflow {
    fn eq(&self, other: &Self) -> bool {
        self.keys == other.keys && self.paths.iter().zip(&other.paths).all(|(a, b)| a.weight == b.weight)
    }
}

impl Eq for Multiflow {}

impl Multiflow {
    pub fn empty() -> Multiflow {
        Multiflow::default()
    }

    /// Builds and validates a multiflow: positive weights, T-path shape and
    /// edge capacities.
    pub fn new(net: &Network, paths: Vec<(TPath, Rational)>) -> Result<Multiflow> {
        let mut f = Multiflow::empty();
        for (p, w) in paths {
            if w < Rational::zero() {
                return Err(Error::InvalidMultiflow(format!("negative weight {w}")));
            }
            p.check_ends(net)?;
            f.add(p, w);
        }
        f.check_capacity(net)?;
        Ok(f)
    }

    /// Every path with weight one.
    pub fn integer(net: &Network, paths: Vec<TPath>) -> Result<Multiflow> {
        Multiflow::new(net, paths.into_iter().map(|p| (p, Rational::one())).collect())
    }

    /// Integer multiflow from node-name sequences; parallel edges are handed
    /// out lowest first across all paths.
    pub fn from_node_names(net: &Network, paths: &[&[&str]]) -> Result<Multiflow> {
        let mut taken = Vec::new();
        let mut out = Vec::with_capacity(paths.len());
        for names in paths {
            let p = TPath::from_node_names_avoiding(net, names, &taken)?;
            taken.extend_from_slice(p.edges());
            out.push(p);
        }
        Multiflow::integer(net, out)
    }

    pub(crate) fn add(&mut self, p: TPath, w: Rational) {
        if w.is_zero() {
            return;
        }
        let key = p.canonical();
        match self.keys.binary_search(&key) {
            Ok(i) => {
                self.paths[i].weight += w;
                if self.paths[i].weight.is_zero() {
                    self.paths.remove(i);
                    self.keys.remove(i);
                }
            }
            Err(i) => {
                self.paths.insert(i, FlowPath { path: p, weight: w });
                self.keys.insert(i, key);
            }
        }
    }

    pub fn paths(&self) -> &[FlowPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn weight_of(&self, p: &TPath) -> Rational {
        match self.keys.binary_search(&p.canonical()) {
            Ok(i) => self.paths[i].weight,
            Err(_) => Rational::zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.paths.iter().all(|fp| fp.weight.is_one())
    }

    /// Total weight |f|.
    pub fn size(&self) -> Rational {
        rational::sum(self.paths.iter().map(|fp| &fp.weight))
    }

    pub fn edge_usage(&self, g: &Multigraph) -> Vec<Rational> {
        let mut usage = vec![Rational::zero(); g.edge_count()];
        for fp in &self.paths {
            for &e in fp.path.edges() {
                usage[e] += fp.weight;
            }
        }
        usage
    }

    pub fn check_capacity(&self, net: &Network) -> Result<()> {
        let g = net.graph();
        for fp in &self.paths {
            if fp.path.nodes.iter().any(|&v| v >= g.node_count()) || fp.path.edges.iter().any(|&e| e >= g.edge_count())
            {
                return Err(Error::InvalidMultiflow("path leaves the network".into()));
            }
        }
        for (e, u) in self.edge_usage(g).iter().enumerate() {
            if *u > Rational::one() {
                return Err(Error::InvalidMultiflow(format!(
                    "edge {:?} carries {}",
                    g.edge(e).id,
                    rational::format(u)
                )));
            }
        }
        Ok(())
    }

    fn weight_where(&self, mut pred: impl FnMut(&TPath) -> bool) -> Rational {
        rational::sum(self.paths.iter().filter(|fp| pred(&fp.path)).map(|fp| &fp.weight))
    }

    /// f[S]: weight on paths with a strong end pair.
    pub fn strong_weight(&self, net: &Network) -> Rational {
        self.weight_where(|p| p.class(net) == PairClass::Strong)
    }

    /// f[W]: weight on paths with a weak end pair.
    pub fn weak_weight(&self, net: &Network) -> Rational {
        self.weight_where(|p| p.class(net) == PairClass::Weak)
    }

    /// f[A,B]: weight on paths with one end in `a` and the other in `b`.
    pub fn between(&self, a: &[NodeIx], b: &[NodeIx]) -> Rational {
        self.weight_where(|p| {
            let (s, t) = (p.start(), p.end());
            (a.contains(&s) && b.contains(&t)) || (a.contains(&t) && b.contains(&s))
        })
    }

    /// f[A]: weight on paths with both ends in `a`.
    pub fn within(&self, a: &[NodeIx]) -> Rational {
        self.weight_where(|p| a.contains(&p.start()) && a.contains(&p.end()))
    }

    /// Θ(f) = f[S] + ½ f[W]; paths between equivalent terminals count zero.
    pub fn theta(&self, net: &Network) -> Rational {
        self.strong_weight(net) + self.weak_weight(net) * rational::half()
    }

    /// Breaks every path at interior visits of terminals other than its own
    /// ends. A closed piece (leaving and re-entering the same terminal) stays
    /// attached to the preceding piece.
    pub fn hat(&self, net: &Network) -> Multiflow {
        let mut out = Multiflow::empty();
        for fp in &self.paths {
            for piece in hat_pieces(net, &fp.path) {
                out.add(piece, fp.weight);
            }
        }
        out
    }

    pub fn display(&self, net: &Network) -> String {
        let g = net.graph();
        self.paths
            .iter()
            .map(|fp| format!("{}:{}", fp.path.display(g), rational::format(&fp.weight)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn hat_pieces(net: &Network, p: &TPath) -> Vec<TPath> {
    let (s, t) = (p.start(), p.end());
    let cuts: Vec<usize> = p
        .interior()
        .filter(|&i| {
            let v = p.nodes[i];
            net.is_terminal(v) && v != s && v != t
        })
        .collect();
    if cuts.is_empty() {
        return vec![p.clone()];
    }
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(p.nodes.len() - 1);
    let mut pieces: Vec<TPath> = Vec::new();
    for w in bounds.windows(2) {
        let piece = TPath { nodes: p.nodes[w[0]..=w[1]].to_vec(), edges: p.edges[w[0]..w[1]].to_vec() };
        let closed = piece.start() == piece.end();
        match pieces.last_mut() {
            Some(last) if closed => {
                last.nodes.extend_from_slice(&piece.nodes[1..]);
                last.edges.extend_from_slice(&piece.edges);
            }
            _ => pieces.push(piece),
        }
    }
    // a closed leading piece has nothing before it: fold it into the next one
    if pieces.len() > 1 && pieces[0].start() == pieces[0].end() {
        let first = pieces.remove(0);
        let next = &mut pieces[0];
        let mut nodes = first.nodes;
        nodes.extend_from_slice(&next.nodes[1..]);
        let mut edges = first.edges;
        edges.extend_from_slice(&next.edges);
        *next = TPath { nodes, edges };
    }
    pieces
}

/// True iff hat(f) carries λ(A) units between `a` and its complement.
pub fn locks(net: &Network, f: &Multiflow, a: &[NodeIx]) -> Result<bool> {
    let lam = lambda(net, a)?;
    let rest = crate::cuts::complement(net, a);
    Ok(f.hat(net).between(a, &rest) == Rational::from_integer(lam as i128))
}

/// ½ Σ_t λ(t): the size of a maximum multiflow in an inner-Eulerian network.
pub fn max_multiflow_size(net: &Network) -> Result<Rational> {
    let mut total = 0usize;
    for &t in net.terminals() {
        total += lambda(net, &[t])?;
    }
    Ok(Rational::new(total as i128, 2))
}
