//! Multigraphs, terminal sets, anticlique clutters and their validation.
//!
//! Node and edge identifiers are opaque strings. Internally every node and
//! edge is addressed by its rank in lexicographic order, so iteration order
//! (and with it every search in the crate) is reproducible.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type NodeIx = usize;
pub type EdgeIx = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [NodeIx; 2],
}

impl Edge {
    pub fn other(&self, v: NodeIx) -> NodeIx {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }

    pub fn touches(&self, v: NodeIx) -> bool {
        self.ends[0] == v || self.ends[1] == v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    names: Vec<String>,
    index: BTreeMap<String, NodeIx>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeIx>>,
}

impl Multigraph {
    /// Builds a multigraph from node names and `(edge id, end, end)` triples.
    /// Parallel edges are distinct records; self-loops are rejected.
    pub fn new<N, E>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut names: Vec<String> = nodes.into_iter().map(Into::into).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Structure(format!("duplicate node id {:?}", w[0])));
            }
        }
        let index: BTreeMap<String, NodeIx> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();

        let mut raw: Vec<(String, String, String)> = edges.into_iter().collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        for w in raw.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Structure(format!("duplicate edge id {:?}", w[0].0)));
            }
        }
        let mut out = Vec::with_capacity(raw.len());
        for (id, u, v) in raw {
            let a = *index.get(&u).ok_or_else(|| {
                Error::Structure(format!("edge {id:?} has dangling endpoint {u:?}"))
            })?;
            let b = *index.get(&v).ok_or_else(|| {
                Error::Structure(format!("edge {id:?} has dangling endpoint {v:?}"))
            })?;
            if a == b {
                return Err(Error::Structure(format!("edge {id:?} is a self-loop at {u:?}")));
            }
            out.push(Edge { id, ends: [a, b] });
        }
        let mut incident = vec![Vec::new(); names.len()];
        for (i, e) in out.iter().enumerate() {
            incident[e.ends[0]].push(i);
            incident[e.ends[1]].push(i);
        }
        Ok(Multigraph { names, index, edges: out, incident })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: NodeIx) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Option<NodeIx> {
        self.index.get(name).copied()
    }

    pub fn require_node(&self, name: &str) -> Result<NodeIx> {
        self.node(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_by_id(&self, id: &str) -> Option<EdgeIx> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn incident(&self, v: NodeIx) -> &[EdgeIx] {
        &self.incident[v]
    }

    pub fn degree(&self, v: NodeIx) -> usize {
        self.incident[v].len()
    }

    /// Nodes reachable from `start` (inclusive).
    pub fn reachable(&self, start: NodeIx) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.incident[v] {
                let w = self.edges[e].other(v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Edge records as `(id, end name, end name)` triples.
    pub fn edge_triples(&self) -> Vec<(String, String, String)> {
        self.edges
            .iter()
            .map(|e| {
                (e.id.clone(), self.names[e.ends[0]].clone(), self.names[e.ends[1]].clone())
            })
            .collect()
    }
}

/// How many clutter members cover a terminal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairClass {
    Strong,
    Weak,
    Equivalent,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairClass::Strong => "STRONG",
            PairClass::Weak => "WEAK",
            PairClass::Equivalent => "EQUIVALENT",
        })
    }
}

/// A family of terminal subsets. Members are kept sorted; the clutter
/// property itself is checked by [`validate`], not enforced here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clutter {
    members: Vec<Vec<NodeIx>>,
}

impl Clutter {
    pub fn new(members: Vec<Vec<NodeIx>>) -> Self {
        let mut members: Vec<Vec<NodeIx>> = members
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m.dedup();
                m
            })
            .collect();
        members.sort();
        Clutter { members }
    }

    pub fn empty() -> Self {
        Clutter::default()
    }

    pub fn members(&self) -> &[Vec<NodeIx>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cover_count(&self, a: NodeIx, b: NodeIx) -> usize {
        self.members
            .iter()
            .filter(|m| m.binary_search(&a).is_ok() && m.binary_search(&b).is_ok())
            .count()
    }

    pub fn class_of(&self, a: NodeIx, b: NodeIx) -> PairClass {
        match self.cover_count(a, b) {
            0 => PairClass::Strong,
            1 => PairClass::Weak,
            _ => PairClass::Equivalent,
        }
    }

    /// Index of the unique member covering the pair, if exactly one does.
    pub fn covering_member(&self, a: NodeIx, b: NodeIx) -> Option<usize> {
        let mut found = None;
        for (i, m) in self.members.iter().enumerate() {
            if m.binary_search(&a).is_ok() && m.binary_search(&b).is_ok() {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn is_antichain(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if is_subset(a, b) || is_subset(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Every triple of pairwise intersecting members shares one pairwise
    /// intersection.
    pub fn satisfies_k_condition(&self) -> bool {
        let m = &self.members;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let ij = intersection(&m[i], &m[j]);
                if ij.is_empty() {
                    continue;
                }
                for k in j + 1..m.len() {
                    let ik = intersection(&m[i], &m[k]);
                    let jk = intersection(&m[j], &m[k]);
                    if ik.is_empty() || jk.is_empty() {
                        continue;
                    }
                    if ij != ik || ik != jk {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_simple(&self) -> bool {
        let m = &self.members;
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if intersection(&m[i], &m[j]).len() > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// All members have two elements and, read as a graph, contain no triangle.
    pub fn is_flat(&self) -> bool {
        if self.members.iter().any(|m| m.len() != 2) {
            return false;
        }
        let pairs: BTreeSet<(NodeIx, NodeIx)> =
            self.members.iter().map(|m| (m[0], m[1])).collect();
        if pairs.len() != self.members.len() {
            return false;
        }
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                if (c, d) <= (a, b) {
                    continue;
                }
                // shared vertex and third edge closing the triangle
                let shared = [a, b].into_iter().find(|x| *x == c || *x == d);
                if let Some(s) = shared {
                    let x = if a == s { b } else { a };
                    let y = if c == s { d } else { c };
                    let key = if x < y { (x, y) } else { (y, x) };
                    if pairs.contains(&key) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn contains_member(&self, member: &[NodeIx]) -> bool {
        let mut m = member.to_vec();
        m.sort_unstable();
        self.members.binary_search(&m).is_ok()
    }
}

pub(crate) fn is_subset(a: &[NodeIx], b: &[NodeIx]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub(crate) fn intersection(a: &[NodeIx], b: &[NodeIx]) -> Vec<NodeIx> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// A network `(G, T, K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    graph: Multigraph,
    terminals: Vec<NodeIx>,
    is_terminal: Vec<bool>,
    clutter: Clutter,
}

impl Network {
    /// Structural checks only: terminals are nodes, clutter members are sets
    /// of terminals. Eulerian and clutter properties are left to [`validate`].
    pub fn new<S: AsRef<str>>(
        graph: Multigraph,
        terminals: &[S],
        clutter: &[Vec<S>],
    ) -> Result<Self> {
        let mut ts = Vec::with_capacity(terminals.len());
        for t in terminals {
            let t = t.as_ref();
            let ix = graph
                .node(t)
                .ok_or_else(|| Error::Structure(format!("terminal {t:?} is not a node")))?;
            ts.push(ix);
        }
        let mut members = Vec::with_capacity(clutter.len());
        for m in clutter {
            let mut member = Vec::with_capacity(m.len());
            for t in m {
                let t = t.as_ref();
                let ix = graph.node(t).ok_or_else(|| {
                    Error::Structure(format!("clutter member names unknown node {t:?}"))
                })?;
                member.push(ix);
            }
            members.push(member);
        }
        Network::from_indices(graph, ts, Clutter::new(members))
    }

    pub fn from_indices(graph: Multigraph, terminals: Vec<NodeIx>, clutter: Clutter) -> Result<Self> {
        let mut terminals = terminals;
        terminals.sort_unstable();
        for w in terminals.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Structure(format!(
                    "duplicate terminal {:?}",
                    graph.name(w[0])
                )));
            }
        }
        let mut is_terminal = vec![false; graph.node_count()];
        for &t in &terminals {
            if t >= graph.node_count() {
                return Err(Error::Structure(format!("terminal index {t} out of range")));
            }
            is_terminal[t] = true;
        }
        for m in clutter.members() {
            for &t in m {
                if t >= graph.node_count() || !is_terminal[t] {
                    return Err(Error::Structure(format!(
                        "clutter member contains non-terminal {:?}",
                        graph.names().get(t).map(String::as_str).unwrap_or("?")
                    )));
                }
            }
        }
        Ok(Network { graph, terminals, is_terminal, clutter })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn terminals(&self) -> &[NodeIx] {
        &self.terminals
    }

    pub fn is_terminal(&self, v: NodeIx) -> bool {
        self.is_terminal[v]
    }

    pub fn inner_nodes(&self) -> Vec<NodeIx> {
        (0..self.graph.node_count()).filter(|&v| !self.is_terminal[v]).collect()
    }

    pub fn clutter(&self) -> &Clutter {
        &self.clutter
    }

    /// Same supply graph and terminals, different clutter.
    pub fn with_clutter(&self, clutter: Clutter) -> Result<Network> {
        Network::from_indices(self.graph.clone(), self.terminals.clone(), clutter)
    }

    pub fn terminal(&self, name: &str) -> Result<NodeIx> {
        let v = self.graph.require_node(name)?;
        if !self.is_terminal[v] {
            return Err(Error::NotTerminal(name.to_string()));
        }
        Ok(v)
    }

    pub fn class_of(&self, a: NodeIx, b: NodeIx) -> PairClass {
        self.clutter.class_of(a, b)
    }

    /// Classifies a terminal pair by the number of clutter members covering it.
    pub fn classify_pair(&self, a: &str, b: &str) -> Result<PairClass> {
        let x = self.terminal(a)?;
        let y = self.terminal(b)?;
        if x == y {
            return Err(Error::Precondition(format!("pair {a:?},{b:?} is not two distinct terminals")));
        }
        Ok(self.class_of(x, y))
    }

    pub fn is_eulerian(&self) -> bool {
        self.odd_inner_nodes().is_empty()
    }

    pub fn odd_inner_nodes(&self) -> Vec<NodeIx> {
        (0..self.graph.node_count())
            .filter(|&v| !self.is_terminal[v] && self.graph.degree(v) % 2 == 1)
            .collect()
    }

    pub fn terminal_names(&self) -> Vec<String> {
        self.terminals.iter().map(|&t| self.graph.name(t).to_string()).collect()
    }

    pub fn clutter_names(&self) -> Vec<Vec<String>> {
        self.clutter
            .members()
            .iter()
            .map(|m| m.iter().map(|&t| self.graph.name(t).to_string()).collect())
            .collect()
    }

    pub fn set_names(&self, set: &[NodeIx]) -> Vec<String> {
        set.iter().map(|&v| self.graph.name(v).to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize)]
pub struct ValidationReport {
    /// Malformed input; when non-empty no property checks were run.
    pub structural: Vec<String>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub require_flat: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }

    pub fn is_structurally_sound(&self) -> bool {
        self.structural.is_empty()
    }

    /// Structure sound, clutter property, Eulerian, K-condition, and (when
    /// requested) flatness all hold.
    pub fn passed(&self) -> bool {
        if !self.structural.is_empty() {
            return false;
        }
        self.checks.iter().all(|c| match c.name {
            "flat" => !self.require_flat || c.passed,
            "simple" => true,
            _ => c.passed,
        })
    }
}

pub fn validate(net: &Network, require_flat: bool) -> ValidationReport {
    let clutter = net.clutter();
    let g = net.graph();
    let mut checks = Vec::new();

    checks.push(Check {
        name: "clutter",
        passed: clutter.is_antichain(),
        detail: (!clutter.is_antichain())
            .then(|| "two members are comparable under inclusion".to_string()),
    });
    let odd = net.odd_inner_nodes();
    checks.push(Check {
        name: "eulerian",
        passed: odd.is_empty(),
        detail: (!odd.is_empty()).then(|| {
            let names: Vec<String> = odd
                .iter()
                .map(|&v| format!("{} (degree {})", g.name(v), g.degree(v)))
                .collect();
            format!("odd inner nodes: {}", names.join(", "))
        }),
    });
    let k = clutter.satisfies_k_condition();
    checks.push(Check {
        name: "k-condition",
        passed: k,
        detail: (!k).then(|| "pairwise intersecting members with unequal intersections".into()),
    });
    let flat = clutter.is_flat();
    checks.push(Check {
        name: "flat",
        passed: flat,
        detail: (!flat).then(|| "a member is not a pair, or the pair graph has a triangle".into()),
    });
    let simple = clutter.is_simple();
    checks.push(Check {
        name: "simple",
        passed: simple,
        detail: (!simple).then(|| "two members share more than one terminal".into()),
    });
    debug_assert!(!flat || simple);

    ValidationReport { structural: Vec::new(), checks, warnings: Vec::new(), require_flat }
}

/// Unvalidated network description, as read from a document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawNetwork {
    pub nodes: Vec<String>,
    pub terminals: Vec<String>,
    /// `(edge id, end, end)`.
    pub edges: Vec<(String, String, String)>,
    pub clutter: Vec<Vec<String>>,
}

impl RawNetwork {
    /// Every structural defect in the description, in a stable order.
    pub fn structural_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.as_str()) {
                errs.push(format!("duplicate node id {n:?}"));
            }
        }
        let mut ids = BTreeSet::new();
        for (id, u, v) in &self.edges {
            if !ids.insert(id.as_str()) {
                errs.push(format!("duplicate edge id {id:?}"));
            }
            for end in [u, v] {
                if !seen.contains(end.as_str()) {
                    errs.push(format!("edge {id:?} has dangling endpoint {end:?}"));
                }
            }
            if u == v {
                errs.push(format!("edge {id:?} is a self-loop at {u:?}"));
            }
        }
        let mut ts = BTreeSet::new();
        for t in &self.terminals {
            if !seen.contains(t.as_str()) {
                errs.push(format!("terminal {t:?} is not a node"));
            }
            if !ts.insert(t.as_str()) {
                errs.push(format!("duplicate terminal {t:?}"));
            }
        }
        for m in &self.clutter {
            for t in m {
                if !ts.contains(t.as_str()) {
                    errs.push(format!("clutter member {m:?} contains non-terminal {t:?}"));
                }
            }
        }
        errs
    }

    pub fn build(&self) -> Result<Network> {
        if let Some(first) = self.structural_errors().into_iter().next() {
            return Err(Error::Structure(first));
        }
        let g = Multigraph::new(self.nodes.iter().cloned(), self.edges.iter().cloned())?;
        Network::new(g, &self.terminals, &self.clutter)
    }
}

/// Validates a raw description, reporting structural defects separately from
/// property failures.
pub fn validate_raw(raw: &RawNetwork, require_flat: bool) -> ValidationReport {
    let structural = raw.structural_errors();
    if !structural.is_empty() {
        return ValidationReport { structural, checks: Vec::new(), warnings: Vec::new(), require_flat };
    }
    match raw.build() {
        Ok(net) => validate(&net, require_flat),
        Err(e) => ValidationReport {
            structural: vec![e.to_string()],
            checks: Vec::new(),
            warnings: Vec::new(),
            require_flat,
        },
    }
}

/// Builds a network from terse literals: terminals, edges as end pairs
/// (ids `e00`, `e01`, … in order) and clutter members. Inner nodes are
/// inferred from the edges.
pub fn network_from_literals(terminals: &[&str], edges: &[(&str, &str)], clutter: &[&[&str]]) -> Result<Network> {
    let mut nodes: BTreeSet<String> = terminals.iter().map(|s| s.to_string()).collect();
    for (u, v) in edges {
        nodes.insert(u.to_string());
        nodes.insert(v.to_string());
    }
    let width = edge_id_width(edges.len());
    let triples: Vec<(String, String, String)> = edges
        .iter()
        .enumerate()
        .map(|(i, (u, v))| (edge_id(i, width), u.to_string(), v.to_string()))
        .collect();
    let g = Multigraph::new(nodes, triples)?;
    let clutter: Vec<Vec<&str>> = clutter.iter().map(|m| m.to_vec()).collect();
    Network::new(g, terminals, &clutter)
}

pub fn edge_id_width(count: usize) -> usize {
    let digits = count.saturating_sub(1).to_string().len();
    digits.max(2)
}

pub fn edge_id(i: usize, width: usize) -> String {
    format!("e{i:0width$}")
}
