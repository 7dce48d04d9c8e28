//! Exhaustive checks of the structural theorems on a single network.
//!
//! Each suite either passes, fails with itemised checks, or is skipped when
//! the network is outside its scope (not flat, not simple, too large).

use crate::dual::{
    dual_solution_indices, enumerate_flat_extensions, expanded_fractional_thetas, fractional_theta, is_critical, maximum_weak_flow, minimal_dual_solution, phi_table,
    search_certificate, verify_certificate, weak_dual_value, DualCheck, SearchBounds,
};
use crate::error::{Error, Result};
use crate::expansion::{enumerate_expansions, expand, expand_with_clutter, Expansion, ExpansionBounds};
use crate::io::PackingFile;
use crate::lp::{LinearProgram, Sense};
use crate::multiflow::{
    absorb_unused_edges, detect_tridents, find_augmenting_sequence, locks, max_multiflow_size, Multiflow, TPath,
};
use crate::network::{Check, Multigraph, Network, NodeIx, PairClass};
use crate::rational::{self, Rational};
use crate::solvers::{
    common_solution, enumerate_paths, flow_from_weights, integrality, path_lp, solve_integer_with, solve_over, Mode,
    Objective, Problem, SolverLimits,
};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    CommonSolution,
    Monotonicity,
    Certificate,
    WeakMaxMin,
    Locking,
    Pivots,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::CommonSolution, Suite::Monotonicity, Suite::Certificate, Suite::WeakMaxMin, Suite::Locking, Suite::Pivots];

    /// Command-line identifier.
    pub fn id(self) -> &'static str {
        match self {
            Suite::CommonSolution => "t1",
            Suite::Monotonicity => "t2",
            Suite::Certificate => "t5",
            Suite::WeakMaxMin => "t8",
            Suite::Locking => "locking",
            Suite::Pivots => "pivots",
        }
    }

    /// The statement the suite checks.
    pub fn anchor(self) -> &'static str {
        match self {
            Suite::CommonSolution => "common solution of the strong and weak problems",
            Suite::Monotonicity => "expansion and extension never decrease η",
            Suite::Certificate => "η = min φ(X, R) over flat extensions and expansions",
            Suite::WeakMaxMin => "θ^FR = min over expansions of ½Σd(X_t) − ½Σβ(A)",
            Suite::Locking => "minimal dual solution: saturation and clutter locking",
            Suite::Pivots => "dual solutions contain every trident pivot",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.id() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub anchor: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TheoremConfig {
    pub limits: SolverLimits,
    pub expansions: ExpansionBounds,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: Some(detail.into()) }
}

fn fmt(r: &Rational) -> String {
    rational::format(r)
}

enum Outcome {
    Checks(Vec<Check>),
    Skip(String),
}

pub fn run_suite(net: &Network, suite: Suite, cfg: &TheoremConfig) -> SuiteReport {
    let outcome = match suite {
        Suite::CommonSolution => common_solution_suite(net, cfg),
        Suite::Monotonicity => monotonicity_suite(net, cfg),
        Suite::Certificate => certificate_suite(net, cfg),
        Suite::WeakMaxMin => weak_max_min_suite(net, cfg),
        Suite::Locking => locking_suite(net, cfg),
        Suite::Pivots => pivot_suite(net, cfg),
    };
    let (status, checks, note) = match outcome {
        Ok(Outcome::Checks(checks)) => {
            let status = if checks.iter().all(|c| c.passed) { Status::Pass } else { Status::Fail };
            (status, checks, None)
        }
        Ok(Outcome::Skip(why)) => (Status::Skipped, Vec::new(), Some(why)),
        Err(e @ (Error::SizeBound(_) | Error::NotFlat(_) | Error::NotSimple(_))) => {
            (Status::Skipped, Vec::new(), Some(e.to_string()))
        }
        Err(e) => (Status::Fail, vec![check("evaluation", false, e.to_string())], None),
    };
    SuiteReport { suite: suite.id(), anchor: suite.anchor(), status, checks, note }
}

/// Runs the suites concurrently; reports come back in the requested order.
pub fn run_suites(net: &Network, suites: &[Suite], cfg: &TheoremConfig) -> Vec<SuiteReport> {
    suites.par_iter().map(|&s| run_suite(net, s, cfg)).collect()
}

fn require_flat(net: &Network) -> Option<Outcome> {
    (!net.clutter().is_flat()).then(|| Outcome::Skip("clutter is not flat".into()))
}

fn require_simple(net: &Network) -> Option<Outcome> {
    (!net.clutter().is_simple()).then(|| Outcome::Skip("clutter is not simple".into()))
}

fn require_eulerian(net: &Network) -> Option<Outcome> {
    (!net.is_eulerian()).then(|| Outcome::Skip("network is not inner-Eulerian".into()))
}

/// η by the exact integer search.
pub fn eta(net: &Network, limits: &SolverLimits) -> Result<i64> {
    let paths = enumerate_paths(net, limits)?;
    Ok(solve_integer_with(net, &paths, Objective::Strong)?.0[0])
}

fn common_solution_suite(net: &Network, cfg: &TheoremConfig) -> Result<Outcome> {
    if let Some(skip) = require_eulerian(net) {
        return Ok(skip);
    }
    let paths = enumerate_paths(net, &cfg.limits)?;
    let eta = Rational::from_integer(solve_integer_with(net, &paths, Objective::Strong)?.0[0] as i128);
    let theta = solve_over(net, &paths, Problem::Weak, Mode::Integer)?.objective;
    Ok(Outcome::Checks(match common_solution(net, &cfg.limits) {
        Ok(sol) => {
            let f = sol.witness;
            vec![
                check("common-solution-weak", f.theta(net) == theta, format!("Θ(f) = {}, θ = {}", fmt(&f.theta(net)), fmt(&theta))),
                check(
                    "common-solution-strong",
                    f.strong_weight(net) == eta,
                    format!("f[S] = {}, η = {}", fmt(&f.strong_weight(net)), fmt(&eta)),
                ),
            ]
        }
        Err(Error::TheoremViolation(msg)) => vec![check("common-solution", false, msg)],
        Err(e) => return Err(e),
    }))
}

/// η of `net` expanded by every `x` under every extension, paths enumerated
/// once per expansion.
pub fn expanded_etas(
    net: &Network,
    exts: &[crate::network::Clutter],
    xs: &[Expansion],
    limits: &SolverLimits,
) -> Result<Vec<(usize, usize, i64)>> {
    let per_x: Vec<Result<Vec<(usize, usize, i64)>>> = xs
        .par_iter()
        .enumerate()
        .map(|(xi, x)| {
            let mut out = Vec::with_capacity(exts.len());
            let mut paths: Option<Vec<TPath>> = None;
            for (ri, r) in exts.iter().enumerate() {
                let ex = expand_with_clutter(net, x, r)?;
                if paths.is_none() {
                    paths = Some(enumerate_paths(&ex.network, limits)?);
                }
                let ps = paths.as_ref().unwrap();
                out.push((ri, xi, solve_integer_with(&ex.network, ps, Objective::Strong)?.0[0]));
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_x {
        all.extend(r?);
    }
    Ok(all)
}

fn monotonicity_suite(net: &Network, cfg: &TheoremConfig) -> Result<Outcome> {
    if let Some(skip) = require_flat(net) {
        return Ok(skip);
    }
    let eta0 = eta(net, &cfg.limits)?;
    let exts = enumerate_flat_extensions(net.clutter())?;
    let xs = enumerate_expansions(net, &cfg.expansions)?;
    let etas = expanded_etas(net, &exts, &xs, &cfg.limits)?;
    let bad: Vec<String> = etas
        .iter()
        .filter(|(_, _, e)| *e < eta0)
        .take(3)
        .map(|(ri, xi, e)| format!("R #{ri}, X #{xi}: η = {e}"))
        .collect();
    Ok(Outcome::Checks(vec![check(
        "expansion-monotonicity",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} (R, X) pairs, all with η ≥ {eta0}", etas.len())
        } else {
            format!("η = {eta0} decreased: {}", bad.join("; "))
        },
    )]))
}

fn certificate_suite(net: &Network, cfg: &TheoremConfig) -> Result<Outcome> {
    if let Some(skip) = require_flat(net) {
        return Ok(skip);
    }
    if let Some(skip) = require_eulerian(net) {
        return Ok(skip);
    }
    let paths = enumerate_paths(net, &cfg.limits)?;
    let (key, packing) = solve_integer_with(net, &paths, Objective::Strong)?;
    let eta = Rational::from_integer(key[0] as i128);
    let exts = enumerate_flat_extensions(net.clutter())?;
    let xs = enumerate_expansions(net, &cfg.expansions)?;
    let table = match phi_table(net, &exts, &xs) {
        Err(e @ Error::NonIntegralMultiplicity { .. }) => return Ok(Outcome::Skip(e.to_string())),
        other => other?,
    };
    let below: Vec<&(Rational, usize, usize)> = table.iter().filter(|(v, _, _)| *v < eta).collect();
    let mut checks = vec![check(
        "phi-upper-bound",
        below.is_empty(),
        match below.first() {
            None => format!("{} (R, X) pairs, all with φ ≥ η = {}", table.len(), fmt(&eta)),
            Some((v, ri, xi)) => format!("φ = {} < η = {} at R #{ri}, X #{xi}", fmt(v), fmt(&eta)),
        },
    )];
    let min = table.iter().map(|t| t.0).min().expect("non-empty table");
    if integrality(net, &cfg.limits)? {
        checks.push(check("phi-equality", min == eta, format!("min φ = {}, η = {}", fmt(&min), fmt(&eta))));
    } else {
        checks.push(check("phi-equality", true, "not applicable: weak problem is not integral"));
    }
    let (cert, value) = search_certificate(net, &SearchBounds { expansions: cfg.expansions })?;
    let pack = PackingFile::strong_paths(net, &packing);
    let report = verify_certificate(net, &cert, &eta, Some(&pack.paths));
    let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
    checks.push(check(
        "certificate-verifies",
        value == min && report.passed(),
        if failed.is_empty() { format!("certificate value {}", fmt(&value)) } else { format!("failed: {}", failed.join(", ")) },
    ));
    Ok(Outcome::Checks(checks))
}

/// θ, θ^FR and the chain quantities for every enumerated expansion.
pub fn weak_dual_table(net: &Network, xs: &[Expansion], limits: &SolverLimits) -> Result<(Rational, Rational, Vec<DualCheck>)> {
    let paths = enumerate_paths(net, limits)?;
    let theta = solve_over(net, &paths, Problem::Weak, Mode::Integer)?.objective;
    let theta_fr = solve_over(net, &paths, Problem::Weak, Mode::Fractional)?.objective;
    let rows = xs
        .par_iter()
        .map(|x| crate::dual::dual_solution_check(net, x, Some((theta, theta_fr)), limits))
        .collect::<Result<Vec<_>>>()?;
    Ok((theta, theta_fr, rows))
}

fn weak_max_min_suite(net: &Network, cfg: &TheoremConfig) -> Result<Outcome> {
    if let Some(skip) = require_simple(net).or_else(|| require_eulerian(net)) {
        return Ok(skip);
    }
    let xs = enumerate_expansions(net, &cfg.expansions)?;
    let (_, theta_fr, rows) = weak_dual_table(net, &xs, &cfg.limits)?;
    let min = rows.iter().map(|r| r.dual_value).min().expect("trivial expansion present");
    let broken: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| !r.chain_holds()).map(|(i, _)| i).collect();
    Ok(Outcome::Checks(vec![
        check("weak-max-min", min == theta_fr, format!("min dual value {}, θ^FR = {}", fmt(&min), fmt(&theta_fr))),
        check(
            "weak-inequality-chain",
            broken.is_empty(),
            match broken.first() {
                None => format!("{} expansions", rows.len()),
                Some(&i) => format!("chain fails at X #{i}: {:?}", rows[i]),
            },
        ),
    ]))
}

/// True iff `f` locks `a`; the whole terminal set is trivially locked.
pub fn member_locked(net: &Network, f: &Multiflow, a: &[NodeIx]) -> Result<bool> {
    if a.len() == net.terminals().len() {
        return Ok(true);
    }
    locks(net, f, a)
}

fn theta_coeff(net: &Network, p: &TPath) -> Rational {
    match p.class(net) {
        PairClass::Strong => Rational::one(),
        PairClass::Weak => rational::half(),
        PairClass::Equivalent => Rational::zero(),
    }
}

/// Path LP maximising Θ with the size fixed to ½Σλ(t) and every set in
/// `locked` carrying λ(A) path ends across its boundary.
pub fn locking_lp(net: &Network, paths: &[TPath], locked: &[Vec<NodeIx>]) -> Result<LinearProgram> {
    let coeffs = paths.iter().map(|p| theta_coeff(net, p)).collect();
    let mut lp = path_lp(net, paths, coeffs);
    lp.add((0..paths.len()).map(|j| (j, Rational::one())).collect(), Sense::Eq, max_multiflow_size(net)?);
    for a in locked {
        if a.len() == net.terminals().len() {
            continue;
        }
        let lam = crate::cuts::lambda(net, a)?;
        let row = paths
            .iter()
            .enumerate()
            .filter(|(_, p)| a.contains(&p.start()) != a.contains(&p.end()))
            .map(|(j, _)| (j, Rational::one()))
            .collect();
        lp.add(row, Sense::Eq, Rational::from_integer(lam as i128));
    }
    Ok(lp)
}

/// Result of the locking checks at one expansion.
#[derive(Debug, Clone)]
pub struct LockingEvidence {
    pub expansion: Expansion,
    pub theta_fr: Rational,
    pub dual_value: Rational,
    pub critical: bool,
    pub theta_fr_expanded: Rational,
    /// Θ of the best maximum multiflow locking every block and member, if any.
    pub locking_witness: Option<(Rational, Multiflow)>,
    /// `(set, locked, augmenting sequence found)` for every block and member.
    pub sequence_checks: Vec<(Vec<String>, bool, bool)>,
    /// Edges no path of the integer witness could absorb; they were removed
    /// before the augmenting-sequence search.
    pub pruned_edges: usize,
}

fn without_edges(net: &Network, drop: &[usize]) -> Result<Network> {
    let g = net.graph();
    let keep: Vec<(String, String, String)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, e)| (e.id.clone(), g.name(e.ends[0]).to_string(), g.name(e.ends[1]).to_string()))
        .collect();
    let g2 = Multigraph::new(g.names().to_vec(), keep)?;
    Network::from_indices(g2, net.terminals().to_vec(), net.clutter().clone())
}

/// Re-expresses a multiflow on a copy of the graph with some edges removed.
fn transfer(from: &Network, to: &Network, f: &Multiflow) -> Result<Multiflow> {
    let gf = from.graph();
    let gt = to.graph();
    let mut parts = Vec::new();
    for fp in f.paths() {
        let edges = fp
            .path
            .edges()
            .iter()
            .map(|&e| gt.edge_by_id(&gf.edge(e).id).ok_or_else(|| Error::InvalidPath("path uses a removed edge".into())))
            .collect::<Result<Vec<_>>>()?;
        parts.push((TPath::from_edges(to, fp.path.start(), edges)?, fp.weight));
    }
    Multiflow::new(to, parts)
}

pub fn locking_evidence(net: &Network, x: &Expansion, cfg: &TheoremConfig) -> Result<LockingEvidence> {
    let theta_fr = fractional_theta(net, &cfg.limits)?;
    let dual_value = weak_dual_value(net, x)?;
    let xs = enumerate_expansions(net, &cfg.expansions)?;
    let critical = is_critical(net, x, &xs, &cfg.limits)?;
    let ex = expand(net, x)?;
    let en = &ex.network;
    let paths = enumerate_paths(en, &cfg.limits)?;
    let theta_fr_expanded = solve_over(en, &paths, Problem::Weak, Mode::Fractional)?.objective;

    let mut sets: Vec<Vec<NodeIx>> = en.terminals().iter().map(|&t| vec![t]).collect();
    sets.extend(en.clutter().members().iter().cloned());
    let lp = locking_lp(en, &paths, &sets)?;
    let locking_witness = match lp.solve()? {
        crate::lp::LpOutcome::Optimal { value, x } => Some((value, flow_from_weights(en, &paths, &x)?)),
        _ => None,
    };

    let (_, int_flow) = solve_integer_with(en, &paths, Objective::SizeThenWeak)?;
    let (absorbed, leftover) = absorb_unused_edges(en, &int_flow)?;
    let (pruned, flow) = if leftover.is_empty() {
        (en.clone(), absorbed)
    } else {
        let p = without_edges(en, &leftover)?;
        let f = transfer(en, &p, &absorbed)?;
        (p, f)
    };
    let mut sequence_checks = Vec::new();
    for a in &sets {
        if a.len() == pruned.terminals().len() {
            continue;
        }
        let locked = member_locked(&pruned, &flow, a)?;
        let seq = find_augmenting_sequence(&pruned, &flow, a)?;
        if let Some(s) = &seq {
            if !s.is_valid(&pruned, a) {
                return Err(Error::TheoremViolation("search returned an invalid augmenting sequence".into()));
            }
        }
        sequence_checks.push((pruned.set_names(a), locked, seq.is_some()));
    }
    Ok(LockingEvidence {
        expansion: x.clone(),
        theta_fr,
        dual_value,
        critical,
        theta_fr_expanded,
        locking_witness,
        sequence_checks,
        pruned_edges: leftover.len(),
    })
}

fn locking_suite(net: &Network, cfg: &TheoremConfig) -> Result<Outcome> {
    if let Some(skip) = require_simple(net).or_else(|| require_eulerian(net)) {
        return Ok(skip);
    }
    let (x, _) = minimal_dual_solution(net, &cfg.limits)?;
    let ev = locking_evidence(net, &x, cfg)?;
    let blocks = x
        .named_blocks(net)
        .iter()
        .map(|(t, b)| format!("{t}:{{{}}}", b.join(",")))
        .collect::<Vec<_>>()
        .join(" ");
    let mut checks = vec![
        check(
            "minimal-dual-solution",
            ev.dual_value == ev.theta_fr,
            format!("X = {blocks}; dual value {}, θ^FR = {}", fmt(&ev.dual_value), fmt(&ev.theta_fr)),
        ),
        check("minimal-dual-critical", ev.critical, "every strict enlargement raises θ^FR of the expanded network"),
    ];
    let witness_ok = match &ev.locking_witness {
        Some((value, h)) => {
            let ex = expand(net, &x)?;
            let en = &ex.network;
            let mut all_locked = true;
            for &t in en.terminals() {
                all_locked &= member_locked(en, h, &[t])?;
            }
            for a in en.clutter().members() {
                all_locked &= member_locked(en, h, a)?;
            }
            *value == ev.theta_fr_expanded && h.theta(en) == *value && all_locked
        }
        None => false,
    };
    checks.push(check(
        "locking-witness",
        witness_ok,
        match &ev.locking_witness {
            Some((v, _)) => format!("Θ = {} with every block and member locked, θ^FR_X = {}", fmt(v), fmt(&ev.theta_fr_expanded)),
            None => "no maximum multiflow locks every block and member".into(),
        },
    ));
    let mismatched: Vec<String> = ev
        .sequence_checks
        .iter()
        .filter(|(_, locked, seq)| locked == seq)
        .map(|(a, locked, _)| format!("{{{}}} {}", a.join(","), if *locked { "locked with a sequence" } else { "unlocked without one" }))
        .collect();
    checks.push(check(
        "locking-iff-no-augmenting-sequence",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("{} sets checked", ev.sequence_checks.len())
        } else {
            mismatched.join("; ")
        },
    ));
    if net.clutter().is_flat() {
        checks.push(extension_locking_check(net, cfg)?);
    }
    Ok(Outcome::Checks(checks))
}

/// A weak-optimal multiflow locking K also locks every flat extension of K.
fn extension_locking_check(net: &Network, cfg: &TheoremConfig) -> Result<Check> {
    let paths = enumerate_paths(net, &cfg.limits)?;
    let theta_fr = solve_over(net, &paths, Problem::Weak, Mode::Fractional)?.objective;
    let mut lp = locking_lp(net, &paths, net.clutter().members())?;
    lp.add(paths.iter().enumerate().map(|(j, p)| (j, theta_coeff(net, p))).collect(), Sense::Eq, theta_fr);
    let h = match lp.solve()? {
        crate::lp::LpOutcome::Optimal { x, .. } => flow_from_weights(net, &paths, &x)?,
        _ => return Ok(check("extension-locking", true, "no weak-optimal maximum multiflow locks the clutter")),
    };
    for r in enumerate_flat_extensions(net.clutter())? {
        for a in r.members() {
            if !member_locked(net, &h, a)? {
                return Ok(check("extension-locking", false, format!("{{{}}} unlocked", net.set_names(a).join(","))));
            }
        }
    }
    Ok(check("extension-locking", true, "every member of every flat extension is locked"))
}

/// Trident pivots of solver-produced maximum flows of the expanded network
/// lying outside the blocks, named in the original network.
pub fn pivots_outside_blocks(net: &Network, x: &Expansion, limits: &SolverLimits) -> Result<Vec<String>> {
    let ex = expand(net, x)?;
    let en = &ex.network;
    let paths = enumerate_paths(en, limits)?;
    let (_, int_flow) = solve_integer_with(en, &paths, Objective::SizeThenWeak)?;
    let (_, lp_flow) = maximum_weak_flow(en, limits)?;
    let covered: BTreeSet<NodeIx> = x.covered().into_iter().collect();
    let mut out = BTreeSet::new();
    for f in [&int_flow, &lp_flow] {
        for tr in detect_tridents(en, f) {
            let original = ex.node_map[tr.pivot];
            if !covered.contains(&original) {
                out.insert(net.graph().name(original).to_string());
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Every enumerated dual solution: critical expansions whose expanded θ^FR
/// equals θ^FR, smallest first.
pub fn dual_solutions(net: &Network, cfg: &TheoremConfig) -> Result<Vec<Expansion>> {
    let theta_fr = fractional_theta(net, &cfg.limits)?;
    let xs = enumerate_expansions(net, &cfg.expansions)?;
    let thetas = expanded_fractional_thetas(net, &xs, &cfg.limits)?;
    let mut out: Vec<Expansion> = dual_solution_indices(&xs, &thetas, theta_fr).into_iter().map(|i| xs[i].clone()).collect();
    out.sort_by_key(|x| x.covered().len());
    Ok(out)
}

fn pivot_suite(net: &Network, cfg: &TheoremConfig) -> Result<Outcome> {
    if let Some(skip) = require_simple(net).or_else(|| require_eulerian(net)) {
        return Ok(skip);
    }
    let xs = dual_solutions(net, cfg)?;
    let mut failures = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let outside = pivots_outside_blocks(net, x, &cfg.limits)?;
        if !outside.is_empty() {
            failures.push(format!("dual solution #{i}: pivots {} outside the blocks", outside.join(",")));
        }
    }
    Ok(Outcome::Checks(vec![check(
        "pivots-inside-blocks",
        failures.is_empty(),
        if failures.is_empty() { format!("{} dual solutions checked", xs.len()) } else { failures.join("; ") },
    )]))
}
