//! Exact solvers for the strong and weak packing problems.
//!
//! Integer optima come from a memoised search over residual edge capacities;
//! fractional optima from an exact path-formulation linear program.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Sense};
use crate::multiflow::{Multiflow, TPath};
use crate::network::{Network, NodeIx, PairClass};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Default cap on the number of edges for exhaustive procedures.
pub const DEFAULT_MAX_EDGES: usize = 14;
/// Default cap on the number of enumerated paths.
pub const DEFAULT_MAX_PATHS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    pub max_edges: usize,
    pub max_paths: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits { max_edges: DEFAULT_MAX_EDGES, max_paths: DEFAULT_MAX_PATHS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    Strong,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Integer,
    Fractional,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub objective: Rational,
    pub witness: Multiflow,
    pub problem: Problem,
    pub mode: Mode,
}

/// Every T-path whose nodes are pairwise distinct, each listed once in the
/// orientation from its lower-indexed end. Paths may run through terminals.
/// Every edge-simple T-walk contains one of these between the same ends, so
/// the list suffices for all optimisation problems here.
pub fn enumerate_paths(net: &Network, limits: &SolverLimits) -> Result<Vec<TPath>> {
    let g = net.graph();
    if g.edge_count() > limits.max_edges {
        return Err(Error::SizeBound(format!(
            "{} edges exceed the exhaustive-search cap of {}",
            g.edge_count(),
            limits.max_edges
        )));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.node_count()];
    let mut edges = Vec::new();
    for &s in net.terminals() {
        on_path[s] = true;
        extend(net, s, s, &mut on_path, &mut edges, &mut out, limits.max_paths)?;
        on_path[s] = false;
    }
    Ok(out)
}

fn extend(
    net: &Network,
    start: NodeIx,
    cur: NodeIx,
    on_path: &mut [bool],
    edges: &mut Vec<usize>,
    out: &mut Vec<TPath>,
    max_paths: usize,
) -> Result<()> {
    let g = net.graph();
    for &e in g.incident(cur) {
        let next = g.edge(e).other(cur);
        if on_path[next] {
            continue;
        }
        edges.push(e);
        if net.is_terminal(next) && next > start {
            if out.len() == max_paths {
                return Err(Error::SizeBound(format!("more than {max_paths} T-paths")));
            }
            out.push(TPath::from_edges(net, start, edges.clone())?);
        }
        on_path[next] = true;
        extend(net, start, next, on_path, edges, out, max_paths)?;
        on_path[next] = false;
        edges.pop();
    }
    Ok(())
}

/// Lexicographic score; compared as a tuple.
pub type Key = [i64; 3];

fn add_key(a: Key, b: Key) -> Key {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Finds a multiset of paths, each edge used at most `capacity` times,
/// maximising the summed key lexicographically. The search always settles the
/// lowest edge with residual capacity: either no further path uses it, or
/// some path whose lowest edge it is gets routed. Ties keep the option
/// examined first, which makes witnesses deterministic.
pub struct PackingSearch<'a> {
    paths: &'a [TPath],
    keys: Vec<Key>,
    by_min_edge: Vec<Vec<usize>>,
    edge_count: usize,
    base: u64,
    memo: HashMap<u64, (Key, Option<usize>)>,
}

const MAX_STATES: u128 = 1 << 34;

impl<'a> PackingSearch<'a> {
    pub fn new(net: &Network, paths: &'a [TPath], keys: Vec<Key>, capacity: u32) -> Result<Self> {
        let m = net.graph().edge_count();
        let base = capacity as u64 + 1;
        let states = (base as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if states > MAX_STATES {
            return Err(Error::SizeBound(format!(
                "capacity {capacity} on {m} edges gives too many residual states"
            )));
        }
        let mut by_min_edge = vec![Vec::new(); m];
        for (i, p) in paths.iter().enumerate() {
            let lo = *p.edges().iter().min().unwrap();
            by_min_edge[lo].push(i);
        }
        Ok(PackingSearch { paths, keys, by_min_edge, edge_count: m, base, memo: HashMap::new() })
    }

    fn digit(&self, state: u64, e: usize) -> u64 {
        (state / self.base.pow(e as u32)) % self.base
    }

    fn best(&mut self, state: u64) -> Key {
        if let Some((k, _)) = self.memo.get(&state) {
            return *k;
        }
        let e = (0..self.edge_count).find(|&e| self.digit(state, e) > 0);
        let Some(e) = e else {
            self.memo.insert(state, ([0; 3], None));
            return [0; 3];
        };
        let unit = self.base.pow(e as u32);
        let dropped = state - self.digit(state, e) * unit;
        let mut best = self.best(dropped);
        let mut choice = None;
        for idx in 0..self.by_min_edge[e].len() {
            let pi = self.by_min_edge[e][idx];
            let fits = self.paths[pi].edges().iter().all(|&f| self.digit(state, f) > 0);
            if !fits {
                continue;
            }
            let next = state - self.paths[pi].edges().iter().map(|&f| self.base.pow(f as u32)).sum::<u64>();
            let cand = add_key(self.keys[pi], self.best(next));
            if cand > best {
                best = cand;
                choice = Some(pi);
            }
        }
        self.memo.insert(state, (best, choice));
        best
    }

    /// Optimal key and the chosen path indices (with repetition).
    pub fn solve(&mut self) -> (Key, Vec<usize>) {
        let full: u64 = (0..self.edge_count).map(|e| (self.base - 1) * self.base.pow(e as u32)).sum();
        let key = self.best(full);
        let mut chosen = Vec::new();
        let mut state = full;
        loop {
            let Some(&(_, choice)) = self.memo.get(&state) else { break };
            match choice {
                Some(pi) => {
                    chosen.push(pi);
                    state -= self.paths[pi].edges().iter().map(|&f| self.base.pow(f as u32)).sum::<u64>();
                }
                None => {
                    match (0..self.edge_count).find(|&e| self.digit(state, e) > 0) {
                        Some(e) => state -= self.digit(state, e) * self.base.pow(e as u32),
                        None => break,
                    }
                }
            }
        }
        (key, chosen)
    }
}

fn class_counts(net: &Network, p: &TPath) -> (i64, i64) {
    match p.class(net) {
        PairClass::Strong => (1, 0),
        PairClass::Weak => (0, 1),
        PairClass::Equivalent => (0, 0),
    }
}

/// Named integer objectives, scored per path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Number of S-paths.
    Strong,
    /// 2Θ = 2f[S] + f[W].
    Weak,
    /// 2Θ, then f[S].
    WeakThenStrong,
    /// |f|.
    Size,
    /// |f|, then 2Θ.
    SizeThenWeak,
}

pub fn path_key(net: &Network, p: &TPath, objective: Objective) -> Key {
    let (s, w) = class_counts(net, p);
    match objective {
        Objective::Strong => [s, 0, 0],
        Objective::Weak => [2 * s + w, 0, 0],
        Objective::WeakThenStrong => [2 * s + w, s, 0],
        Objective::Size => [1, 0, 0],
        Objective::SizeThenWeak => [1, 2 * s + w, 0],
    }
}

/// Best integer multiflow for `objective` over the given path list.
pub fn solve_integer_with(net: &Network, paths: &[TPath], objective: Objective) -> Result<(Key, Multiflow)> {
    let keys: Vec<Key> = paths.iter().map(|p| path_key(net, p, objective)).collect();
    let mut search = PackingSearch::new(net, paths, keys, 1)?;
    let (key, chosen) = search.solve();
    let flow = Multiflow::integer(net, chosen.into_iter().map(|i| paths[i].clone()).collect())?;
    Ok((key, flow))
}

fn objective_coeff(net: &Network, p: &TPath, problem: Problem) -> Rational {
    match (problem, p.class(net)) {
        (_, PairClass::Strong) => Rational::one(),
        (Problem::Weak, PairClass::Weak) => Rational::new(1, 2),
        _ => Rational::zero(),
    }
}

/// The path LP: one variable per path, unit capacity per edge.
pub fn path_lp(net: &Network, paths: &[TPath], coeffs: Vec<Rational>) -> LinearProgram {
    let m = net.graph().edge_count();
    let mut lp = LinearProgram::new(paths.len());
    lp.objective = coeffs;
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m];
    for (j, p) in paths.iter().enumerate() {
        for &e in p.edges() {
            rows[e].push((j, Rational::one()));
        }
    }
    for row in rows {
        if !row.is_empty() {
            lp.add(row, Sense::Le, Rational::one());
        }
    }
    lp
}

pub(crate) fn flow_from_weights(net: &Network, paths: &[TPath], x: &[Rational]) -> Result<Multiflow> {
    Multiflow::new(
        net,
        paths.iter().zip(x).filter(|(_, w)| !w.is_zero()).map(|(p, w)| (p.clone(), *w)).collect(),
    )
}

pub fn solve_fractional_with(net: &Network, paths: &[TPath], problem: Problem) -> Result<(Rational, Multiflow)> {
    let coeffs = paths.iter().map(|p| objective_coeff(net, p, problem)).collect();
    let lp = path_lp(net, paths, coeffs);
    let (value, x) = lp.solve()?.optimal()?;
    Ok((value, flow_from_weights(net, paths, &x)?))
}

pub fn solve(net: &Network, problem: Problem, mode: Mode, limits: &SolverLimits) -> Result<SolveResult> {
    let paths = enumerate_paths(net, limits)?;
    solve_over(net, &paths, problem, mode)
}

pub fn solve_over(net: &Network, paths: &[TPath], problem: Problem, mode: Mode) -> Result<SolveResult> {
    let (objective, witness) = match mode {
        Mode::Integer => {
            let obj = match problem {
                Problem::Strong => Objective::Strong,
                Problem::Weak => Objective::Weak,
            };
            let (key, flow) = solve_integer_with(net, paths, obj)?;
            let value = match problem {
                Problem::Strong => Rational::from_integer(key[0] as i128),
                Problem::Weak => Rational::new(key[0] as i128, 2),
            };
            (value, flow)
        }
        Mode::Fractional => solve_fractional_with(net, paths, problem)?,
    };
    Ok(SolveResult { objective, witness, problem, mode })
}

/// η: maximum number of edge-disjoint S-paths.
pub fn solve_strong(net: &Network, mode: Mode, limits: &SolverLimits) -> Result<SolveResult> {
    solve(net, Problem::Strong, mode, limits)
}

/// θ: maximum of f[S] + ½ f[W].
pub fn solve_weak(net: &Network, mode: Mode, limits: &SolverLimits) -> Result<SolveResult> {
    solve(net, Problem::Weak, mode, limits)
}

/// An integer multiflow optimal for both problems at once. Its absence is
/// reported as a theorem violation.
pub fn common_solution(net: &Network, limits: &SolverLimits) -> Result<SolveResult> {
    let paths = enumerate_paths(net, limits)?;
    let (eta, _) = solve_integer_with(net, &paths, Objective::Strong)?;
    let (key, flow) = solve_integer_with(net, &paths, Objective::WeakThenStrong)?;
    if key[1] != eta[0] {
        return Err(Error::TheoremViolation(format!(
            "no weak-optimal integer multiflow reaches η = {}; best f[S] is {}",
            eta[0], key[1]
        )));
    }
    Ok(SolveResult { objective: Rational::new(key[0] as i128, 2), witness: flow, problem: Problem::Weak, mode: Mode::Integer })
}

/// True iff the fractional and integer weak optima coincide.
pub fn integrality(net: &Network, limits: &SolverLimits) -> Result<bool> {
    let paths = enumerate_paths(net, limits)?;
    let int = solve_over(net, &paths, Problem::Weak, Mode::Integer)?.objective;
    let frac = solve_over(net, &paths, Problem::Weak, Mode::Fractional)?.objective;
    Ok(int == frac)
}

/// Smallest `D <= max_denominator` such that some weak-optimal fractional
/// multiflow has all weights in (1/D)·ℤ, with a witness. Multiplying every
/// edge by `D` turns such a multiflow into an integer one, so each `D` is
/// decided by an exact integer search with capacity `D`.
pub fn fractionality(net: &Network, max_denominator: u32, limits: &SolverLimits) -> Result<Option<(u32, Multiflow)>> {
    let paths = enumerate_paths(net, limits)?;
    let (theta_fr, _) = solve_fractional_with(net, &paths, Problem::Weak)?;
    let keys: Vec<Key> = paths.iter().map(|p| path_key(net, p, Objective::Weak)).collect();
    for d in 1..=max_denominator {
        let mut search = PackingSearch::new(net, &paths, keys.clone(), d)?;
        let (key, chosen) = search.solve();
        let value = Rational::new(key[0] as i128, 2 * d as i128);
        if value == theta_fr {
            let w = Rational::new(1, d as i128);
            let parts = chosen.into_iter().map(|i| (paths[i].clone(), w)).collect();
            return Ok(Some((d, Multiflow::new(net, parts)?)));
        }
    }
    Ok(None)
}
