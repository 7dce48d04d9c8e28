//! Clutter extensions, the Γ graph on expansion blocks, the certificate
//! function φ(X, R), and certificate search and verification.

mod weak;

pub use weak::{
    block_lambdas, dual_solution_check, dual_solution_indices, expanded_fractional_thetas, fractional_theta,
    is_critical, maximum_weak_flow, minimal_dual_solution, weak_dual_value, DualCheck, SaturationProfile,
};

use crate::cuts::{beta, lambda};
use crate::error::{Error, Result};
use crate::expansion::{enumerate_expansions, expand_with_clutter, Expansion, ExpansionBounds};
use crate::matching::{max_b_matching, BMatching};
use crate::multiflow::{Multiflow, TPath};
use crate::network::{Check, Clutter, Network, NodeIx, PairClass};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// True iff every pair strong in `k1` is also strong in `k2`.
pub fn clutter_extends(net: &Network, k1: &Clutter, k2: &Clutter) -> Result<bool> {
    for k in [k1, k2] {
        for m in k.members() {
            if m.iter().any(|&t| t >= net.graph().node_count() || !net.is_terminal(t)) {
                return Err(Error::InvalidSubset("clutter is not over the network's terminals".into()));
            }
        }
    }
    let ts = net.terminals();
    for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i + 1..] {
            if k1.class_of(a, b) == PairClass::Strong && k2.class_of(a, b) != PairClass::Strong {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All sub-clutters of a flat clutter, ordered by their sorted member lists
/// (the empty clutter first).
pub fn enumerate_flat_extensions(k: &Clutter) -> Result<Vec<Clutter>> {
    if !k.is_flat() {
        return Err(Error::NotFlat("extensions are enumerated for flat clutters only".into()));
    }
    let members = k.members();
    if members.len() > 20 {
        return Err(Error::SizeBound(format!("{} clutter members give too many extensions", members.len())));
    }
    let mut out: Vec<Clutter> = (0u32..1 << members.len())
        .map(|mask| {
            Clutter::new((0..members.len()).filter(|i| mask >> i & 1 == 1).map(|i| members[i].clone()).collect())
        })
        .collect();
    out.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(out)
}

/// One Γ edge: a member `{t, s}` of the extension with multiplicity
/// β({X_t, X_s}) computed in the expanded network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaEdge {
    pub ends: [NodeIx; 2],
    pub mul: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    pub edges: Vec<GammaEdge>,
}

impl GammaGraph {
    /// Edges of the line graph L(Γ): Γ edges sharing a block.
    pub fn line_graph(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                let (a, b) = (self.edges[i].ends, self.edges[j].ends);
                if a.iter().any(|v| b.contains(v)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Multiplicities as b-values; half-integral ones are refused.
    pub fn b_vector(&self, net: &Network) -> Result<Vec<u64>> {
        self.edges
            .iter()
            .map(|e| {
                if !rational::is_integral(&e.mul) || e.mul < Rational::zero() {
                    Err(Error::NonIntegralMultiplicity {
                        pair: net.set_names(&e.ends).join(","),
                        value: rational::format(&e.mul),
                    })
                } else {
                    Ok(e.mul.to_integer() as u64)
                }
            })
            .collect()
    }
}

fn require_flat(r: &Clutter) -> Result<()> {
    if !r.is_flat() {
        return Err(Error::NotFlat("the extension must be flat".into()));
    }
    Ok(())
}

/// Γ for expansion `x` and flat extension `r`.
pub fn build_gamma(net: &Network, x: &Expansion, r: &Clutter) -> Result<GammaGraph> {
    require_flat(r)?;
    let ex = expand_with_clutter(net, x, r)?;
    let mut edges = Vec::with_capacity(r.len());
    for m in r.members() {
        let pair = [ex.node_map[m[0]], ex.node_map[m[1]]];
        edges.push(GammaEdge { ends: [m[0], m[1]], mul: beta(&ex.network, &pair)? });
    }
    Ok(GammaGraph { edges })
}

/// Maximum uncapacitated b-matching on L(Γ) with b = mul.
pub fn gamma_matching(net: &Network, gamma: &GammaGraph) -> Result<BMatching> {
    let b = gamma.b_vector(net)?;
    max_b_matching(&b, &gamma.line_graph())
}

/// Every term of φ(X, R).
#[derive(Debug, Clone)]
pub struct PhiEvaluation {
    /// λ(X_t) in the expanded network, per original terminal.
    pub lambda_values: Vec<(NodeIx, usize)>,
    pub gamma: GammaGraph,
    pub matching: BMatching,
    pub value: Rational,
}

/// φ(X, R) = ½ Σ_t λ(X_t) − Σ_{A∈R} β(A) + m(Γ), every term taken in the
/// network expanded by `x` with clutter induced from `r`.
pub fn phi_details(net: &Network, x: &Expansion, r: &Clutter) -> Result<PhiEvaluation> {
    require_flat(r)?;
    let ex = expand_with_clutter(net, x, r)?;
    let mut lambda_values = Vec::with_capacity(net.terminals().len());
    let mut total = 0usize;
    for &t in net.terminals() {
        let l = lambda(&ex.network, &[ex.node_map[t]])?;
        total += l;
        lambda_values.push((t, l));
    }
    let mut edges = Vec::with_capacity(r.len());
    for m in r.members() {
        let pair = [ex.node_map[m[0]], ex.node_map[m[1]]];
        edges.push(GammaEdge { ends: [m[0], m[1]], mul: beta(&ex.network, &pair)? });
    }
    let gamma = GammaGraph { edges };
    let matching = gamma_matching(net, &gamma)?;
    let betas = rational::sum(gamma.edges.iter().map(|e| &e.mul));
    let value = Rational::new(total as i128, 2) - betas + Rational::from_integer(matching.value as i128);
    Ok(PhiEvaluation { lambda_values, gamma, matching, value })
}

pub fn phi(net: &Network, x: &Expansion, r: &Clutter) -> Result<Rational> {
    Ok(phi_details(net, x, r)?.value)
}

/// One b-matching pick: two extension pairs sharing a terminal, taken
/// `count` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingPick {
    pub a: [String; 2],
    pub b: [String; 2],
    pub count: u64,
}

/// An (R, X) pair with every quantity needed to recompute φ(X, R).
/// Names refer to the original network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub extension: Vec<[String; 2]>,
    pub expansion: BTreeMap<String, Vec<String>>,
    pub lambda_values: BTreeMap<String, u64>,
    pub beta_values: Vec<([String; 2], Rational)>,
    pub matching: Vec<MatchingPick>,
    pub value: Rational,
}

fn pair_names(net: &Network, ends: &[NodeIx; 2]) -> [String; 2] {
    let mut p = [net.graph().name(ends[0]).to_string(), net.graph().name(ends[1]).to_string()];
    p.sort();
    p
}

impl Certificate {
    pub fn build(net: &Network, x: &Expansion, r: &Clutter) -> Result<Certificate> {
        let eval = phi_details(net, x, r)?;
        let g = net.graph();
        let extension: Vec<[String; 2]> = eval.gamma.edges.iter().map(|e| pair_names(net, &e.ends)).collect();
        let lambda_values = eval.lambda_values.iter().map(|(t, l)| (g.name(*t).to_string(), *l as u64)).collect();
        let beta_values = eval.gamma.edges.iter().map(|e| (pair_names(net, &e.ends), e.mul)).collect();
        let lg = eval.gamma.line_graph();
        let matching = eval
            .matching
            .picks
            .iter()
            .map(|&(k, count)| {
                let (i, j) = lg[k];
                MatchingPick { a: extension[i].clone(), b: extension[j].clone(), count }
            })
            .collect();
        Ok(Certificate { extension, expansion: x.named_blocks(net), lambda_values, beta_values, matching, value: eval.value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchBounds {
    pub expansions: ExpansionBounds,
}

/// Minimises φ over every flat extension R ⪰ K and every enumerated
/// expansion X. Ties go to the smallest R (by sorted member list), then the
/// earliest X in enumeration order.
pub fn search_certificate(net: &Network, bounds: &SearchBounds) -> Result<(Certificate, Rational)> {
    if !net.clutter().is_flat() {
        return Err(Error::NotFlat("certificate search needs a flat network".into()));
    }
    let exts = enumerate_flat_extensions(net.clutter())?;
    let xs = enumerate_expansions(net, &bounds.expansions)?;
    let (value, ri, xi) = phi_table(net, &exts, &xs)?
        .into_iter()
        .min_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)))
        .expect("at least the empty extension and trivial expansion");
    Ok((Certificate::build(net, &xs[xi], &exts[ri])?, value))
}

/// φ for every (extension, expansion) pair as `(value, ext index, exp index)`,
/// in row-major order.
pub fn phi_table(net: &Network, exts: &[Clutter], xs: &[Expansion]) -> Result<Vec<(Rational, usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..exts.len()).flat_map(|r| (0..xs.len()).map(move |x| (r, x))).collect();
    pairs.par_iter().map(|&(r, x)| Ok((phi(net, &xs[x], &exts[r])?, r, x))).collect()
}

/// Itemised outcome of certificate verification.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub recomputed_value: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: Some(detail.into()) }
}

fn sorted_pair(p: &[String; 2]) -> [String; 2] {
    let mut q = p.clone();
    q.sort();
    q
}

/// Builds an integer multiflow from edge-id sequences, each forming a T-path.
pub fn packing_from_edge_ids(net: &Network, lists: &[Vec<String>]) -> Result<Multiflow> {
    let g = net.graph();
    let mut paths = Vec::with_capacity(lists.len());
    for ids in lists {
        let edges: Vec<usize> = ids
            .iter()
            .map(|id| g.edge_by_id(id).ok_or_else(|| Error::InvalidPath(format!("unknown edge {id:?}"))))
            .collect::<Result<_>>()?;
        let first = *edges.first().ok_or_else(|| Error::InvalidPath("empty path".into()))?;
        let ends = g.edge(first).ends;
        let mut found = None;
        for start in ends {
            if let Ok(p) = TPath::from_edges(net, start, edges.clone()) {
                found = Some(p);
                break;
            }
        }
        paths.push(found.ok_or_else(|| Error::InvalidPath(format!("edges {ids:?} do not form a T-path")))?);
    }
    Multiflow::integer(net, paths)
}

/// Recomputes λ, β, m(Γ) and φ from the network and (R, X) alone and checks
/// every field of the certificate against them, then `claimed_eta <= φ`.
/// With a packing, also checks it is edge-disjoint and holds `claimed_eta`
/// S-paths.
pub fn verify_certificate(
    net: &Network,
    cert: &Certificate,
    claimed_eta: &Rational,
    packing: Option<&[Vec<String>]>,
) -> VerificationReport {
    let g = net.graph();
    let mut checks = Vec::new();

    // extension
    let mut r_members: Vec<Vec<NodeIx>> = Vec::new();
    let mut ext_problem = None;
    let mut seen = BTreeSet::new();
    for pair in &cert.extension {
        let p = sorted_pair(pair);
        if !seen.insert(p.clone()) {
            ext_problem = Some(format!("pair {p:?} listed twice"));
            break;
        }
        let ix: Vec<Option<NodeIx>> = p.iter().map(|n| g.node(n).filter(|&v| net.is_terminal(v))).collect();
        match (ix[0], ix[1]) {
            (Some(a), Some(b)) if a != b => {
                let mut m = vec![a, b];
                m.sort_unstable();
                if !net.clutter().contains_member(&m) {
                    ext_problem = Some(format!("pair {p:?} is not a clutter member"));
                    break;
                }
                r_members.push(m);
            }
            _ => {
                ext_problem = Some(format!("pair {p:?} is not two distinct terminals"));
                break;
            }
        }
    }
    let r = Clutter::new(r_members);
    let r_ok = ext_problem.is_none();
    checks.push(check("extension-members", r_ok, ext_problem.unwrap_or_else(|| format!("{} pairs", cert.extension.len()))));
    let flat = r_ok && r.is_flat() && clutter_extends(net, net.clutter(), &r).unwrap_or(false);
    checks.push(check("extension-flat", flat, if flat { "flat extension of the clutter" } else { "not a flat extension" }));

    // expansion
    let x = Expansion::from_named(net, &cert.expansion);
    checks.push(check(
        "expansion",
        x.is_ok(),
        match &x {
            Ok(_) => "valid expansion".to_string(),
            Err(e) => e.to_string(),
        },
    ));

    let eval = match (&x, r_ok && flat) {
        (Ok(x), true) => phi_details(net, x, &r).map_err(|e| e.to_string()),
        _ => Err("skipped: extension or expansion invalid".to_string()),
    };
    match &eval {
        Err(msg) => {
            for name in ["lambda-values", "beta-values", "matching-feasible", "matching-maximum", "value", "upper-bound"] {
                checks.push(check(name, false, msg.clone()));
            }
        }
        Ok(ev) => {
            // lambda values
            let want: BTreeMap<String, u64> =
                ev.lambda_values.iter().map(|(t, l)| (g.name(*t).to_string(), *l as u64)).collect();
            let lam_ok = want == cert.lambda_values;
            checks.push(check(
                "lambda-values",
                lam_ok,
                if lam_ok { "match".to_string() } else { format!("recomputed {want:?}") },
            ));

            // beta values
            let want_beta: BTreeMap<[String; 2], Rational> =
                ev.gamma.edges.iter().map(|e| (pair_names(net, &e.ends), e.mul)).collect();
            let mut got_beta = BTreeMap::new();
            let mut dup = false;
            for (p, v) in &cert.beta_values {
                dup |= got_beta.insert(sorted_pair(p), *v).is_some();
            }
            let beta_ok = !dup && got_beta == want_beta;
            checks.push(check(
                "beta-values",
                beta_ok,
                if beta_ok {
                    "match".to_string()
                } else {
                    let shown: Vec<String> =
                        want_beta.iter().map(|(p, v)| format!("{}{}={}", p[0], p[1], rational::format(v))).collect();
                    format!("recomputed {}", shown.join(" "))
                },
            ));

            // matching feasibility against the recomputed b-vector
            let mut load: BTreeMap<[String; 2], u64> = BTreeMap::new();
            let mut feasible = Ok(());
            let mut picked = BTreeSet::new();
            for pick in &cert.matching {
                let (a, b) = (sorted_pair(&pick.a), sorted_pair(&pick.b));
                let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                let share = a.iter().filter(|v| b.contains(v)).count();
                if a == b || share != 1 || !want_beta.contains_key(&a) || !want_beta.contains_key(&b) {
                    feasible = Err(format!("pick {a:?}/{b:?} is not an edge of the line graph"));
                    break;
                }
                if pick.count == 0 || !picked.insert(key) {
                    feasible = Err(format!("pick {a:?}/{b:?} has zero count or repeats"));
                    break;
                }
                *load.entry(a).or_default() += pick.count;
                *load.entry(b).or_default() += pick.count;
            }
            if feasible.is_ok() {
                for (p, l) in &load {
                    let cap = want_beta[p];
                    if Rational::from_integer(*l as i128) > cap {
                        feasible = Err(format!("pair {p:?} used {l} times, multiplicity {}", rational::format(&cap)));
                        break;
                    }
                }
            }
            checks.push(check(
                "matching-feasible",
                feasible.is_ok(),
                feasible.err().unwrap_or_else(|| "within multiplicities".into()),
            ));
            let total: u64 = cert.matching.iter().map(|p| p.count).sum();
            checks.push(check(
                "matching-maximum",
                total == ev.matching.value,
                format!("certificate {total}, maximum {}", ev.matching.value),
            ));
            checks.push(check(
                "value",
                cert.value == ev.value,
                format!("certificate {}, recomputed {}", rational::format(&cert.value), rational::format(&ev.value)),
            ));
            checks.push(check(
                "upper-bound",
                *claimed_eta <= ev.value,
                format!("claimed {} against φ = {}", rational::format(claimed_eta), rational::format(&ev.value)),
            ));
        }
    }

    if let Some(lists) = packing {
        match packing_from_edge_ids(net, lists) {
            Ok(f) => {
                checks.push(check("packing-valid", true, format!("{} edge-disjoint paths", f.len())));
                let s = f.strong_weight(net);
                checks.push(check(
                    "packing-count",
                    s == *claimed_eta,
                    format!("{} S-paths, claimed {}", rational::format(&s), rational::format(claimed_eta)),
                ));
            }
            Err(e) => {
                checks.push(check("packing-valid", false, e.to_string()));
                checks.push(check("packing-count", false, "skipped: packing invalid"));
            }
        }
    }
    let recomputed_value = eval.ok().map(|e| rational::format(&e.value));
    VerificationReport { checks, recomputed_value }
}

/// Single-field corruptions of a certificate, each of which makes it
/// inconsistent with any recomputation.
pub fn certificate_mutations(net: &Network, cert: &Certificate) -> Vec<(String, Certificate)> {
    let mut out = Vec::new();
    let mut push = |what: String, c: Certificate| out.push((what, c));
    for (t, l) in &cert.lambda_values {
        for delta in [1i64, -1, 2] {
            let v = *l as i64 + delta;
            if v >= 0 {
                let mut c = cert.clone();
                c.lambda_values.insert(t.clone(), v as u64);
                push(format!("lambda {t} {delta:+}"), c);
            }
        }
    }
    for i in 0..cert.beta_values.len() {
        for delta in [1i64, -1] {
            let mut c = cert.clone();
            c.beta_values[i].1 += Rational::from_integer(delta as i128);
            push(format!("beta #{i} {delta:+}"), c);
        }
        let mut c = cert.clone();
        c.beta_values[i].1 += rational::half();
        push(format!("beta #{i} +1/2"), c);
    }
    for delta in [rational::half(), -rational::half(), Rational::one(), -Rational::one()] {
        let mut c = cert.clone();
        c.value += delta;
        push(format!("value {}", rational::format(&delta)), c);
    }
    for i in 0..cert.matching.len() {
        let mut c = cert.clone();
        c.matching[i].count += 1;
        push(format!("matching #{i} +1"), c);
        let mut c = cert.clone();
        if c.matching[i].count > 1 {
            c.matching[i].count -= 1;
        } else {
            c.matching.remove(i);
        }
        push(format!("matching #{i} -1"), c);
        let mut c = cert.clone();
        c.matching.remove(i);
        push(format!("matching #{i} removed"), c);
    }
    if let Some(first) = cert.extension.first() {
        let mut c = cert.clone();
        c.matching.push(MatchingPick { a: first.clone(), b: first.clone(), count: 1 });
        push("matching pick of a pair with itself".into(), c);
    }
    for i in 0..cert.extension.len() {
        let mut c = cert.clone();
        c.extension.remove(i);
        push(format!("extension drops #{i}"), c);
    }
    let have: BTreeSet<[String; 2]> = cert.extension.iter().map(sorted_pair).collect();
    for m in net.clutter().members() {
        let p = [net.graph().name(m[0]).to_string(), net.graph().name(m[1.min(m.len() - 1)]).to_string()];
        if m.len() == 2 && !have.contains(&sorted_pair(&p)) {
            let mut c = cert.clone();
            c.extension.push(p.clone());
            push(format!("extension adds {p:?}"), c);
        }
    }
    let terminals = net.terminal_names();
    for t in &terminals {
        let mut c = cert.clone();
        if let Some(block) = c.expansion.get_mut(t) {
            block.retain(|v| v != t);
            push(format!("expansion drops terminal {t}"), c);
        }
        if let Some(other) = terminals.iter().find(|s| *s != t) {
            let mut c = cert.clone();
            if let Some(block) = c.expansion.get_mut(t) {
                block.push(other.clone());
                push(format!("expansion puts {other} into block {t}"), c);
            }
        }
        let mut c = cert.clone();
        if let Some(block) = c.expansion.get_mut(t) {
            block.push("\u{0}missing".into());
            push(format!("expansion adds unknown node to {t}"), c);
        }
    }
    for (t, block) in &cert.expansion {
        for v in block.iter().filter(|v| *v != t) {
            if let Some(s) = terminals.iter().find(|s| *s != t) {
                let mut c = cert.clone();
                c.expansion.get_mut(s).unwrap().push(v.clone());
                push(format!("expansion puts {v} in blocks {t} and {s}"), c);
            }
        }
    }
    let mut c = cert.clone();
    if let Some(t) = terminals.first() {
        c.expansion.remove(t);
        push(format!("expansion loses block {t}"), c);
    }
    out
}
