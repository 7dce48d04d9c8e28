//! Terminal expansions and the contracted network they induce.

use crate::error::{Error, Result};
use crate::network::{Clutter, EdgeIx, Multigraph, Network, NodeIx};
use std::collections::BTreeMap;

/// Pairwise disjoint node blocks, one per terminal, each holding exactly
/// its own terminal. Blocks need not induce connected subgraphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expansion {
    /// `owner[v]` is the terminal whose block contains `v`.
    owner: Vec<Option<NodeIx>>,
}

impl Expansion {
    pub fn trivial(net: &Network) -> Expansion {
        let mut owner = vec![None; net.graph().node_count()];
        for &t in net.terminals() {
            owner[t] = Some(t);
        }
        Expansion { owner }
    }

    /// Builds an expansion from `terminal -> block` (blocks list every node
    /// including the terminal itself). Every terminal must have a block.
    pub fn from_blocks(net: &Network, blocks: &BTreeMap<NodeIx, Vec<NodeIx>>) -> Result<Expansion> {
        let n = net.graph().node_count();
        let mut owner: Vec<Option<NodeIx>> = vec![None; n];
        for (&t, block) in blocks {
            if t >= n || !net.is_terminal(t) {
                return Err(Error::InvalidExpansion(format!("block key {t} is not a terminal")));
            }
            let tname = net.graph().name(t);
            if !block.contains(&t) {
                return Err(Error::InvalidExpansion(format!("block of {tname:?} is missing its terminal")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::InvalidExpansion(format!("node index {v} out of range")));
                }
                if v != t && net.is_terminal(v) {
                    return Err(Error::InvalidExpansion(format!(
                        "block of {tname:?} contains foreign terminal {:?}",
                        net.graph().name(v)
                    )));
                }
                match owner[v] {
                    Some(o) if o != t => {
                        return Err(Error::InvalidExpansion(format!(
                            "node {:?} lies in the blocks of both {:?} and {tname:?}",
                            net.graph().name(v),
                            net.graph().name(o)
                        )))
                    }
                    _ => owner[v] = Some(t),
                }
            }
        }
        for &t in net.terminals() {
            if owner[t] != Some(t) {
                return Err(Error::InvalidExpansion(format!(
                    "terminal {:?} has no block",
                    net.graph().name(t)
                )));
            }
        }
        Ok(Expansion { owner })
    }

    pub fn from_named(net: &Network, blocks: &BTreeMap<String, Vec<String>>) -> Result<Expansion> {
        let g = net.graph();
        let mut ix = BTreeMap::new();
        for (t, block) in blocks {
            let tv = g.node(t).ok_or_else(|| Error::InvalidExpansion(format!("unknown terminal {t:?}")))?;
            let mut b = Vec::with_capacity(block.len());
            for v in block {
                b.push(g.node(v).ok_or_else(|| Error::InvalidExpansion(format!("unknown node {v:?}")))?);
            }
            if ix.insert(tv, b).is_some() {
                return Err(Error::InvalidExpansion(format!("terminal {t:?} has two blocks")));
            }
        }
        Expansion::from_blocks(net, &ix)
    }

    /// Builds from an assignment of inner nodes (in `net.inner_nodes()` order)
    /// to terminals.
    pub(crate) fn from_assignment(net: &Network, inner: &[NodeIx], assign: &[Option<NodeIx>]) -> Expansion {
        let mut x = Expansion::trivial(net);
        for (&v, a) in inner.iter().zip(assign) {
            x.owner[v] = *a;
        }
        x
    }

    pub fn owner(&self, v: NodeIx) -> Option<NodeIx> {
        self.owner[v]
    }

    pub fn block(&self, t: NodeIx) -> Vec<NodeIx> {
        (0..self.owner.len()).filter(|&v| self.owner[v] == Some(t)).collect()
    }

    pub fn blocks(&self) -> BTreeMap<NodeIx, Vec<NodeIx>> {
        let mut out: BTreeMap<NodeIx, Vec<NodeIx>> = BTreeMap::new();
        for (v, o) in self.owner.iter().enumerate() {
            if let Some(t) = o {
                out.entry(*t).or_default().push(v);
            }
        }
        out
    }

    pub fn named_blocks(&self, net: &Network) -> BTreeMap<String, Vec<String>> {
        self.blocks()
            .into_iter()
            .map(|(t, b)| (net.graph().name(t).to_string(), net.set_names(&b)))
            .collect()
    }

    /// Nodes lying in some block.
    pub fn covered(&self) -> Vec<NodeIx> {
        (0..self.owner.len()).filter(|&v| self.owner[v].is_some()).collect()
    }

    pub fn is_trivial(&self, net: &Network) -> bool {
        (0..self.owner.len()).all(|v| self.owner[v].is_none() || net.is_terminal(v))
    }

    /// Blockwise containment: every block of `self` lies inside some block
    /// of `other`. Reflexive.
    pub fn precedes(&self, other: &Expansion) -> bool {
        self.owner.len() == other.owner.len()
            && self
                .owner
                .iter()
                .zip(&other.owner)
                .all(|(a, b)| a.is_none() || a == b)
    }

    pub fn strictly_precedes(&self, other: &Expansion) -> bool {
        self.precedes(other) && self != other
    }

    /// Block nodes that cannot be reached from their terminal in the graph.
    pub fn warnings(&self, net: &Network) -> Vec<String> {
        let g = net.graph();
        let mut out = Vec::new();
        for (t, block) in self.blocks() {
            let reach = g.reachable(t);
            for v in block {
                if !reach[v] {
                    out.push(format!(
                        "node {:?} in the block of {:?} is unreachable from its terminal",
                        g.name(v),
                        g.name(t)
                    ));
                }
            }
        }
        out
    }
}

/// The contracted network: one terminal per block, block-internal edges
/// deleted, everything else kept with original edge ids.
#[derive(Debug, Clone)]
pub struct ExpandedNetwork {
    pub network: Network,
    /// Original node -> contracted node.
    pub node_map: Vec<NodeIx>,
    /// Original edge -> contracted edge, `None` for deleted block-internal edges.
    pub edge_map: Vec<Option<EdgeIx>>,
}

/// Contracts every block to its terminal. The induced clutter maps each
/// member to the blocks of its terminals (block nodes keep the terminal names).
pub fn expand(net: &Network, x: &Expansion) -> Result<ExpandedNetwork> {
    expand_with_clutter(net, x, net.clutter())
}

/// As [`expand`] but inducing a different clutter on the same terminals.
pub fn expand_with_clutter(net: &Network, x: &Expansion, clutter: &Clutter) -> Result<ExpandedNetwork> {
    let g = net.graph();
    if x.owner.len() != g.node_count() {
        return Err(Error::InvalidExpansion("expansion belongs to a different network".into()));
    }
    let rep = |v: NodeIx| -> NodeIx { x.owner[v].unwrap_or(v) };
    let kept_nodes: Vec<String> = (0..g.node_count())
        .filter(|&v| x.owner[v].map_or(true, |t| t == v))
        .map(|v| g.name(v).to_string())
        .collect();
    let mut triples = Vec::new();
    for e in g.edges() {
        let (a, b) = (rep(e.ends[0]), rep(e.ends[1]));
        if a != b {
            triples.push((e.id.clone(), g.name(a).to_string(), g.name(b).to_string()));
        }
    }
    let cg = Multigraph::new(kept_nodes, triples)?;
    let terminals: Vec<NodeIx> = net.terminals().iter().map(|&t| cg.node(g.name(t)).unwrap()).collect();
    let members: Vec<Vec<NodeIx>> = clutter
        .members()
        .iter()
        .map(|m| m.iter().map(|&t| cg.node(g.name(t)).unwrap()).collect())
        .collect();
    let node_map: Vec<NodeIx> = (0..g.node_count()).map(|v| cg.node(g.name(rep(v))).unwrap()).collect();
    let edge_map: Vec<Option<EdgeIx>> = g.edges().iter().map(|e| cg.edge_by_id(&e.id)).collect();
    let network = Network::from_indices(cg, terminals, Clutter::new(members))?;
    Ok(ExpandedNetwork { network, node_map, edge_map })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionBounds {
    /// Only assignments placing at most this many inner nodes in blocks.
    pub max_inner_assigned: Option<usize>,
    /// Refuse enumerations producing more expansions than this.
    pub max_count: usize,
}

impl Default for ExpansionBounds {
    fn default() -> Self {
        ExpansionBounds { max_inner_assigned: None, max_count: 1 << 16 }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Number of expansions [`enumerate_expansions`] would produce.
pub fn expansion_count(net: &Network, bounds: &ExpansionBounds) -> u128 {
    let inner = net.inner_nodes().len();
    let t = net.terminals().len() as u128;
    let cap = bounds.max_inner_assigned.unwrap_or(inner).min(inner);
    (0..=cap).map(|k| binomial(inner, k) * t.pow(k as u32)).sum()
}

/// Every assignment of inner nodes to a terminal block or to none, in
/// lexicographic order of the assignment vector (unassigned first, then
/// terminals in name order). The trivial expansion comes first.
pub fn enumerate_expansions(net: &Network, bounds: &ExpansionBounds) -> Result<Vec<Expansion>> {
    let count = expansion_count(net, bounds);
    if count > bounds.max_count as u128 {
        return Err(Error::SizeBound(format!(
            "{count} expansions exceed the enumeration bound {}",
            bounds.max_count
        )));
    }
    let inner = net.inner_nodes();
    let terms = net.terminals();
    let cap = bounds.max_inner_assigned.unwrap_or(inner.len());
    let choices = terms.len() + 1;
    let mut digits = vec![0usize; inner.len()];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let assigned = digits.iter().filter(|d| **d > 0).count();
        if assigned <= cap {
            let assign: Vec<Option<NodeIx>> =
                digits.iter().map(|&d| if d == 0 { None } else { Some(terms[d - 1]) }).collect();
            out.push(Expansion::from_assignment(net, &inner, &assign));
        }
        // odometer, last inner node fastest
        let mut i = inner.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices {
                break;
            }
            digits[i] = 0;
        }
    }
}
