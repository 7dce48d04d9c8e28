//! Max-min duality for the weak problem over expansions, and the minimal
//! dual solution read off the saturation pattern of optimal multiflows.

use crate::cuts::{beta, cut_degree, lambda};
use crate::error::{Error, Result};
use crate::expansion::{expand, Expansion};
use crate::lp::Sense;
use crate::multiflow::{max_multiflow_size, Multiflow, TPath};
use crate::network::{EdgeIx, Network, NodeIx, PairClass};
use crate::rational::{self, Rational};
use crate::solvers::{enumerate_paths, flow_from_weights, path_lp, solve_over, Mode, Problem, SolverLimits};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, VecDeque};

fn require_simple(net: &Network) -> Result<()> {
    if !net.clutter().is_simple() {
        return Err(Error::NotSimple("the weak max-min theory covers simple clutters only".into()));
    }
    Ok(())
}

/// β(A), with β(T) = ½ Σ_t λ(t).
fn beta_of_member(net: &Network, a: &[NodeIx]) -> Result<Rational> {
    if a.len() == net.terminals().len() {
        return Ok(max_multiflow_size(net)?);
    }
    beta(net, a)
}

/// ½ Σ_t d(X_t) − ½ Σ_{A∈K_X} β(A), in the network expanded by `x`.
pub fn weak_dual_value(net: &Network, x: &Expansion) -> Result<Rational> {
    require_simple(net)?;
    let ex = expand(net, x)?;
    let g = ex.network.graph();
    let mut degrees = 0usize;
    for &t in net.terminals() {
        degrees += cut_degree(g, &[ex.node_map[t]])?;
    }
    let mut betas = Rational::zero();
    for m in ex.network.clutter().members() {
        betas += beta_of_member(&ex.network, m)?;
    }
    Ok(Rational::new(degrees as i128, 2) - betas / 2)
}

/// θ^FR.
pub fn fractional_theta(net: &Network, limits: &SolverLimits) -> Result<Rational> {
    let paths = enumerate_paths(net, limits)?;
    Ok(solve_over(net, &paths, Problem::Weak, Mode::Fractional)?.objective)
}

fn theta_coeff(net: &Network, p: &TPath) -> Rational {
    match p.class(net) {
        PairClass::Strong => Rational::one(),
        PairClass::Weak => rational::half(),
        PairClass::Equivalent => Rational::zero(),
    }
}

/// Maximum Θ over maximum multiflows (size ½ Σ λ(t)), with an optimal
/// witness. In inner-Eulerian networks this equals θ^FR.
pub fn maximum_weak_flow(net: &Network, limits: &SolverLimits) -> Result<(Rational, Multiflow)> {
    let paths = enumerate_paths(net, limits)?;
    let coeffs = paths.iter().map(|p| theta_coeff(net, p)).collect();
    let mut lp = path_lp(net, &paths, coeffs);
    lp.add((0..paths.len()).map(|j| (j, Rational::one())).collect(), Sense::Eq, max_multiflow_size(net)?);
    let (value, x) = lp.solve()?.optimal().map_err(|e| {
        Error::TheoremViolation(format!("no multiflow reaches the maximum size ½Σλ(t): {e}"))
    })?;
    Ok((value, flow_from_weights(net, &paths, &x)?))
}

/// Edges left below capacity by at least one maximum, weak-optimal
/// fractional multiflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationProfile {
    pub theta_fr: Rational,
    pub max_size: Rational,
    pub unsaturated: Vec<EdgeIx>,
}

fn saturation_profile(net: &Network, limits: &SolverLimits) -> Result<SaturationProfile> {
    let paths = enumerate_paths(net, limits)?;
    let theta_fr = solve_over(net, &paths, Problem::Weak, Mode::Fractional)?.objective;
    let max_size = max_multiflow_size(net)?;
    let mut base = path_lp(net, &paths, vec![Rational::zero(); paths.len()]);
    base.add(paths.iter().enumerate().map(|(j, p)| (j, theta_coeff(net, p))).collect(), Sense::Eq, theta_fr);
    base.add((0..paths.len()).map(|j| (j, Rational::one())).collect(), Sense::Eq, max_size);
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); net.graph().edge_count()];
    for (j, p) in paths.iter().enumerate() {
        for &e in p.edges() {
            users[e].push(j);
        }
    }
    let mut unsaturated = Vec::new();
    for (e, js) in users.iter().enumerate() {
        if js.is_empty() {
            unsaturated.push(e);
            continue;
        }
        let mut lp = base.clone();
        lp.objective = vec![Rational::zero(); paths.len()];
        for &j in js {
            lp.objective[j] = -Rational::one();
        }
        let (value, _) = lp.solve()?.optimal().map_err(|err| {
            Error::TheoremViolation(format!("no maximum multiflow attains θ^FR = {}: {err}", rational::format(&theta_fr)))
        })?;
        // value = −min usage(e); unsaturated somewhere iff 1 − min usage > 0
        if Rational::one() + value > Rational::zero() {
            unsaturated.push(e);
        }
    }
    Ok(SaturationProfile { theta_fr, max_size, unsaturated })
}

/// X_t = {t} ∪ nodes reached from t along edges some maximum weak-optimal
/// multiflow leaves unsaturated. Blocks meeting each other or another
/// terminal are reported as theorem violations. The result attains the
/// weak dual minimum but need not be critical: a strict enlargement can keep
/// θ^FR, for instance when every terminal pair is weak.
pub fn minimal_dual_solution(net: &Network, limits: &SolverLimits) -> Result<(Expansion, SaturationProfile)> {
    require_simple(net)?;
    let profile = saturation_profile(net, limits)?;
    let g = net.graph();
    let mut free = vec![false; g.edge_count()];
    for &e in &profile.unsaturated {
        free[e] = true;
    }
    let mut owner: Vec<Option<NodeIx>> = vec![None; g.node_count()];
    for &t in net.terminals() {
        owner[t] = Some(t);
    }
    for &t in net.terminals() {
        let mut queue = VecDeque::from([t]);
        let mut seen = vec![false; g.node_count()];
        seen[t] = true;
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                if !free[e] {
                    continue;
                }
                let w = g.edge(e).other(v);
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                match owner[w] {
                    Some(o) if o != t => {
                        return Err(Error::TheoremViolation(format!(
                            "unsaturated edges join the blocks of {} and {} at {}",
                            g.name(o),
                            g.name(t),
                            g.name(w)
                        )));
                    }
                    _ => {
                        owner[w] = Some(t);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let mut blocks: BTreeMap<NodeIx, Vec<NodeIx>> = BTreeMap::new();
    for (v, o) in owner.iter().enumerate() {
        if let Some(t) = o {
            blocks.entry(*t).or_default().push(v);
        }
    }
    Ok((Expansion::from_blocks(net, &blocks)?, profile))
}

/// Every quantity of the chain θ ≤ θ^FR ≤ θ^FR_X ≤ ½Σd(X_t) − ½Σβ(A) for one
/// expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCheck {
    pub theta: Rational,
    pub theta_fr: Rational,
    pub theta_fr_expanded: Rational,
    pub dual_value: Rational,
}

impl DualCheck {
    pub fn chain_holds(&self) -> bool {
        self.theta <= self.theta_fr && self.theta_fr <= self.theta_fr_expanded && self.theta_fr_expanded <= self.dual_value
    }

    /// The expansion attains the minimum of the max-min formula.
    pub fn attains_minimum(&self) -> bool {
        self.dual_value == self.theta_fr
    }
}

/// Solves the original and the expanded network for one expansion. Pass
/// `theta` and `theta_fr` of the original network when already known.
pub fn dual_solution_check(
    net: &Network,
    x: &Expansion,
    known: Option<(Rational, Rational)>,
    limits: &SolverLimits,
) -> Result<DualCheck> {
    let (theta, theta_fr) = match known {
        Some(k) => k,
        None => {
            let paths = enumerate_paths(net, limits)?;
            (
                solve_over(net, &paths, Problem::Weak, Mode::Integer)?.objective,
                solve_over(net, &paths, Problem::Weak, Mode::Fractional)?.objective,
            )
        }
    };
    let ex = expand(net, x)?;
    let theta_fr_expanded = fractional_theta(&ex.network, limits)?;
    let dual_value = weak_dual_value(net, x)?;
    Ok(DualCheck { theta, theta_fr, theta_fr_expanded, dual_value })
}

/// θ^FR of the network expanded by each of `xs`.
pub fn expanded_fractional_thetas(net: &Network, xs: &[Expansion], limits: &SolverLimits) -> Result<Vec<Rational>> {
    xs.iter().map(|x| fractional_theta(&expand(net, x)?.network, limits)).collect()
}

/// True iff θ^FR of the expanded network strictly grows under every
/// enumerated strict enlargement of `x`.
pub fn is_critical(net: &Network, x: &Expansion, candidates: &[Expansion], limits: &SolverLimits) -> Result<bool> {
    let base = fractional_theta(&expand(net, x)?.network, limits)?;
    for y in candidates {
        if x.strictly_precedes(y) && fractional_theta(&expand(net, y)?.network, limits)? <= base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of the dual solutions among `xs`: critical expansions whose
/// expanded θ^FR equals θ^FR. `thetas[i]` is θ^FR expanded by `xs[i]`.
pub fn dual_solution_indices(xs: &[Expansion], thetas: &[Rational], theta_fr: Rational) -> Vec<usize> {
    (0..xs.len())
        .filter(|&i| {
            thetas[i] == theta_fr
                && (0..xs.len()).all(|j| !xs[i].strictly_precedes(&xs[j]) || thetas[j] > thetas[i])
        })
        .collect()
}

/// λ(X_t) for each terminal in the expanded network, for locking checks.
pub fn block_lambdas(net: &Network, x: &Expansion) -> Result<Vec<(NodeIx, usize)>> {
    let ex = expand(net, x)?;
    net.terminals().iter().map(|&t| Ok((t, lambda(&ex.network, &[ex.node_map[t]])?))).collect()
}
