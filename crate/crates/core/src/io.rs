//! JSON documents for networks, certificates, packings and solver output.
//! Rationals are always written as "p/q" strings.

use crate::dual::{Certificate, MatchingPick};
use crate::error::{Error, Result};
use crate::multiflow::Multiflow;
use crate::network::{edge_id, edge_id_width, Network, RawNetwork};
use crate::rational::{self, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

fn syntax(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: line {}, column {}: {e}", e.line(), e.column()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<String>,
    pub terminals: Vec<String>,
    pub edges: Vec<Vec<String>>,
    #[serde(default)]
    pub clutter: Vec<Vec<String>>,
}

impl NetworkFile {
    pub fn parse(text: &str) -> Result<NetworkFile> {
        serde_json::from_str(text).map_err(|e| syntax("network", e))
    }

    /// Checks shape field by field; edges get ids `e00`, `e01`, … in file
    /// order.
    pub fn to_raw(&self) -> Result<RawNetwork> {
        let mut seen = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(first) = seen.insert(n.as_str(), i) {
                return Err(Error::Parse(format!("nodes[{i}]: duplicate node id {n:?} (first at nodes[{first}])")));
            }
        }
        let width = edge_id_width(self.edges.len());
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            if e.len() != 2 {
                return Err(Error::Parse(format!("edges[{i}]: expected 2 endpoints, found {}", e.len())));
            }
            for end in e {
                if !seen.contains_key(end.as_str()) {
                    return Err(Error::Parse(format!("edges[{i}]: unknown node {end:?}")));
                }
            }
            if e[0] == e[1] {
                return Err(Error::Parse(format!("edges[{i}]: self-loop at {:?}", e[0])));
            }
            edges.push((edge_id(i, width), e[0].clone(), e[1].clone()));
        }
        let mut ts = BTreeMap::new();
        for (i, t) in self.terminals.iter().enumerate() {
            if !seen.contains_key(t.as_str()) {
                return Err(Error::Parse(format!("terminals[{i}]: unknown node {t:?}")));
            }
            if ts.insert(t.as_str(), i).is_some() {
                return Err(Error::Parse(format!("terminals[{i}]: duplicate terminal {t:?}")));
            }
        }
        for (i, m) in self.clutter.iter().enumerate() {
            for (j, t) in m.iter().enumerate() {
                if !ts.contains_key(t.as_str()) {
                    return Err(Error::Parse(format!("clutter[{i}][{j}]: {t:?} is not a terminal")));
                }
            }
        }
        Ok(RawNetwork {
            nodes: self.nodes.clone(),
            terminals: self.terminals.clone(),
            edges,
            clutter: self.clutter.clone(),
        })
    }

    pub fn to_network(&self) -> Result<Network> {
        self.to_raw()?.build().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_network(net: &Network) -> NetworkFile {
        let g = net.graph();
        NetworkFile {
            nodes: g.names().to_vec(),
            terminals: net.terminal_names(),
            edges: g.edges().iter().map(|e| vec![g.name(e.ends[0]).to_string(), g.name(e.ends[1]).to_string()]).collect(),
            clutter: net.clutter_names(),
        }
    }

    /// Canonical form: sorted nodes, terminals and members; edge order kept.
    pub fn normalize(&self) -> NetworkFile {
        let mut n = self.clone();
        n.nodes.sort();
        n.terminals.sort();
        for m in n.clutter.iter_mut() {
            m.sort();
        }
        n.clutter.sort();
        n
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network documents serialize")
    }
}

pub fn parse_network(text: &str) -> Result<Network> {
    NetworkFile::parse(text)?.to_network()
}

pub fn network_to_json(net: &Network) -> String {
    NetworkFile::from_network(net).to_json()
}

fn parse_rational(field: &str, s: &str) -> Result<Rational> {
    rational::parse(s).map_err(|e| Error::Parse(format!("{field}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaEntry {
    pub pair: [String; 2],
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickEntry {
    pub a: [String; 2],
    pub b: [String; 2],
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CertificateFile {
    pub extension: Vec<[String; 2]>,
    pub expansion: BTreeMap<String, Vec<String>>,
    pub lambda_values: BTreeMap<String, u64>,
    pub beta_values: Vec<BetaEntry>,
    pub matching: Vec<PickEntry>,
    pub value: String,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<CertificateFile> {
        serde_json::from_str(text).map_err(|e| syntax("certificate", e))
    }

    pub fn from_certificate(c: &Certificate) -> CertificateFile {
        CertificateFile {
            extension: c.extension.clone(),
            expansion: c.expansion.clone(),
            lambda_values: c.lambda_values.clone(),
            beta_values: c
                .beta_values
                .iter()
                .map(|(p, v)| BetaEntry { pair: p.clone(), value: rational::format(v) })
                .collect(),
            matching: c.matching.iter().map(|m| PickEntry { a: m.a.clone(), b: m.b.clone(), count: m.count }).collect(),
            value: rational::format(&c.value),
        }
    }

    pub fn to_certificate(&self) -> Result<Certificate> {
        let beta_values = self
            .beta_values
            .iter()
            .enumerate()
            .map(|(i, b)| Ok((b.pair.clone(), parse_rational(&format!("betaValues[{i}].value"), &b.value)?)))
            .collect::<Result<_>>()?;
        Ok(Certificate {
            extension: self.extension.clone(),
            expansion: self.expansion.clone(),
            lambda_values: self.lambda_values.clone(),
            beta_values,
            matching: self.matching.iter().map(|m| MatchingPick { a: m.a.clone(), b: m.b.clone(), count: m.count }).collect(),
            value: parse_rational("value", &self.value)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate documents serialize")
    }
}

/// Edge-disjoint paths, each an ordered list of edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingFile {
    pub paths: Vec<Vec<String>>,
}

impl PackingFile {
    pub fn parse(text: &str) -> Result<PackingFile> {
        serde_json::from_str(text).map_err(|e| syntax("packing", e))
    }

    /// The S-paths of an integer multiflow.
    pub fn strong_paths(net: &Network, f: &Multiflow) -> PackingFile {
        let g = net.graph();
        PackingFile {
            paths: f
                .paths()
                .iter()
                .filter(|fp| fp.path.class(net) == crate::network::PairClass::Strong)
                .map(|fp| fp.path.edge_ids(g))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("packing documents serialize")
    }
}

/// One weighted path of a solver witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathEntry {
    pub nodes: Vec<String>,
    pub edges: Vec<String>,
    pub class: &'static str,
    pub weight: String,
}

pub fn multiflow_entries(net: &Network, f: &Multiflow) -> Vec<PathEntry> {
    let g = net.graph();
    f.paths()
        .iter()
        .map(|fp| PathEntry {
            nodes: fp.path.nodes().iter().map(|&v| g.name(v).to_string()).collect(),
            edges: fp.path.edge_ids(g),
            class: match fp.path.class(net) {
                crate::network::PairClass::Strong => "S",
                crate::network::PairClass::Weak => "W",
                crate::network::PairClass::Equivalent => "E",
            },
            weight: rational::format(&fp.weight),
        })
        .collect()
}
