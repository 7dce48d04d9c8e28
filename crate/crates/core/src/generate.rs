//! Seeded random network instances.

use crate::error::{Error, Result};
use crate::network::{edge_id, edge_id_width, Multigraph, Network};
use crate::solvers::{integrality, SolverLimits};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// Total node count, terminals included.
    pub nodes: usize,
    pub terminals: usize,
    /// Random edges drawn before parity repair and doubling.
    pub edges: usize,
    /// Probability of each candidate clutter member.
    pub clutter_density: f64,
    pub seed: u64,
    pub ensure_eulerian: bool,
    pub ensure_flat: bool,
    pub ensure_integral: bool,
    pub double_edges: bool,
    pub max_retries: usize,
    pub limits: SolverLimits,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            nodes: 6,
            terminals: 3,
            edges: 7,
            clutter_density: 0.4,
            seed: 0,
            ensure_eulerian: true,
            ensure_flat: true,
            ensure_integral: false,
            double_edges: false,
            max_retries: 200,
            limits: SolverLimits::default(),
        }
    }
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    let width = count.saturating_sub(1).to_string().len();
    (0..count).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// Draws a network; with `ensure_integral`, redraws from the same stream
/// until the weak problem is integral or the retry budget runs out.
pub fn generate(params: &GenParams) -> Result<Network> {
    if params.terminals < 2 || params.terminals > params.nodes {
        return Err(Error::Precondition(format!(
            "need 2 <= terminals <= nodes, got {} terminals and {} nodes",
            params.terminals, params.nodes
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let attempts = if params.ensure_integral { params.max_retries.max(1) } else { 1 };
    for _ in 0..attempts {
        let net = draw(params, &mut rng)?;
        if !params.ensure_integral || integrality(&net, &params.limits)? {
            return Ok(net);
        }
    }
    Err(Error::RetryBudget(attempts))
}

fn draw(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Network> {
    let terminals = names("t", params.terminals);
    let inner = names("v", params.nodes - params.terminals);
    let all: Vec<String> = terminals.iter().chain(&inner).cloned().collect();
    let n = all.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for _ in 0..params.edges {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        pairs.push((u, v));
    }
    if params.ensure_eulerian && !params.double_edges {
        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut odd: Vec<usize> = (params.terminals..n).filter(|&v| degree[v] % 2 == 1).collect();
        odd.shuffle(rng);
        for chunk in odd.chunks(2) {
            match chunk {
                [u, v] => pairs.push((*u, *v)),
                [u] => pairs.push((*u, rng.gen_range(0..params.terminals))),
                _ => unreachable!(),
            }
        }
    }
    if params.double_edges {
        let copy = pairs.clone();
        pairs.extend(copy);
    }
    let width = edge_id_width(pairs.len());
    let edges: Vec<(String, String, String)> =
        pairs.iter().enumerate().map(|(i, &(u, v))| (edge_id(i, width), all[u].clone(), all[v].clone())).collect();
    let graph = Multigraph::new(all.clone(), edges)?;
    let clutter = if params.ensure_flat {
        flat_clutter(params, rng)
    } else {
        general_clutter(params, rng)
    };
    let clutter: Vec<Vec<String>> =
        clutter.iter().map(|m| m.iter().map(|&i| terminals[i].clone()).collect()).collect();
    Network::new(graph, &terminals, &clutter)
}

/// Random triangle-free set of terminal pairs.
fn flat_clutter(params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let k = params.terminals;
    let mut candidates: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    candidates.shuffle(rng);
    let mut chosen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (a, b) in candidates {
        if !rng.gen_bool(params.clutter_density.clamp(0.0, 1.0)) {
            continue;
        }
        let closes_triangle = (0..k).any(|c| {
            let has = |x: usize, y: usize| chosen.contains(&(x.min(y), x.max(y)));
            c != a && c != b && has(a, c) && has(b, c)
        });
        if !closes_triangle {
            chosen.insert((a, b));
        }
    }
    chosen.into_iter().map(|(a, b)| vec![a, b]).collect()
}

/// Random antichain of terminal subsets with at least two members each.
fn general_clutter(params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let k = params.terminals;
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for _ in 0..k {
        if !rng.gen_bool(params.clutter_density.clamp(0.0, 1.0)) {
            continue;
        }
        let size = rng.gen_range(2..=k);
        let mut ts: Vec<usize> = (0..k).collect();
        ts.shuffle(rng);
        let mut m = ts[..size].to_vec();
        m.sort_unstable();
        sets.push(m);
    }
    sets.sort();
    sets.dedup();
    let contains = |big: &Vec<usize>, small: &Vec<usize>| small.iter().all(|t| big.contains(t));
    sets.iter()
        .filter(|m| !sets.iter().any(|o| o != *m && contains(o, m)))
        .cloned()
        .collect()
}
