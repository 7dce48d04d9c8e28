//! End-to-end acceptance run: every criterion is checked against an
//! independent brute-force oracle and reported on its own line.


use oracle::{Cuts, Plain};
use pathpack::cuts::max_flow;
use pathpack::dual::{
    certificate_mutations, dual_solution_indices, enumerate_flat_extensions, expanded_fractional_thetas, maximum_weak_flow, minimal_dual_solution, phi_table,
    search_certificate, verify_certificate, Certificate, SearchBounds,
};
use pathpack::expansion::{enumerate_expansions, expand, ExpansionBounds, Expansion};
use pathpack::generate::{generate, GenParams};
use pathpack::io::{parse_network, CertificateFile, PackingFile};
use pathpack::matching::max_b_matching;
use pathpack::multiflow::{
    pairings, preserves_paths, restore_split, split_multiflow, switch, three_halves, Multiflow, Pairing, SwitchVariant,
    TPath,
};
use pathpack::network::{network_from_literals, Clutter, Multigraph, Network};
use pathpack::rational;
use pathpack::solvers::{common_solution, enumerate_paths, integrality, solve_integer_with, Objective, SolverLimits};
use pathpack::theorems::{
    dual_solutions, eta, expanded_etas, locking_evidence, pivots_outside_blocks, weak_dual_table, TheoremConfig,
};
use pathpack::{Error, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: pathpack::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fmt(r: &Rational) -> String {
    rational::format(r)
}

fn limits() -> SolverLimits {
    SolverLimits::default()
}

fn cfg() -> TheoremConfig {
    TheoremConfig::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A flat Eulerian instance with every φ term integral, and its φ table.
struct FlatCase {
    seed: u64,
    net: Network,
    exts: Vec<Clutter>,
    xs: Vec<Expansion>,
    phi: Vec<(Rational, usize, usize)>,
}

fn flat_cases() -> (Vec<FlatCase>, usize) {
    let mut out = Vec::new();
    let mut rejected = 0;
    let mut seed = 0u64;
    while out.len() < 50 {
        seed += 1;
        let mut r = rng(1_000 + seed);
        let terminals = r.gen_range(3..=4);
        let nodes = r.gen_range(terminals + 1..=7);
        let edges = r.gen_range(nodes..=10);
        let params = GenParams { nodes, terminals, edges, clutter_density: 0.5, seed, ..GenParams::default() };
        let net = generate(&params).expect("generator");
        if net.graph().edge_count() > 12 || net.clutter().is_empty() {
            continue;
        }
        let exts = enumerate_flat_extensions(net.clutter()).expect("flat clutter");
        let xs = enumerate_expansions(&net, &ExpansionBounds::default()).expect("expansions");
        match phi_table(&net, &exts, &xs) {
            Ok(phi) => out.push(FlatCase { seed, net, exts, xs, phi }),
            Err(Error::NonIntegralMultiplicity { .. }) => rejected += 1,
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    (out, rejected)
}

/// Simple K-networks: Eulerian, simple clutter satisfying the K-condition.
fn simple_k_instances(count: usize, first_seed: u64) -> Vec<(u64, Network)> {
    let mut out = Vec::new();
    let mut seed = first_seed;
    while out.len() < count {
        seed += 1;
        let mut r = rng(2_000_000 + seed);
        let terminals = r.gen_range(3..=5);
        let nodes = r.gen_range(terminals + 1..=7);
        let edges = r.gen_range(nodes..=10);
        let params = GenParams {
            nodes,
            terminals,
            edges,
            clutter_density: 0.7,
            seed,
            ensure_flat: false,
            ..GenParams::default()
        };
        let net = generate(&params).expect("generator");
        let k = net.clutter();
        if net.graph().edge_count() > 12 || k.is_empty() || !k.is_simple() || !k.satisfies_k_condition() {
            continue;
        }
        out.push((seed, net));
    }
    out
}

fn contracted(net: &Network, plain: &Plain, x: &Expansion) -> Plain {
    oracle::contract(plain, &oracle::owners(net, x))
}

fn sorted_pairs(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
}

/// The oracle contraction and the library's expanded network must agree
/// index for index, so flows of one can be read in the other.
fn same_contraction(mine: &Plain, theirs: &Network) -> bool {
    let t = Plain::of(theirs);
    mine.n == t.n
        && sorted_pairs(&mine.edges) == sorted_pairs(&t.edges)
        && mine.terminals == t.terminals
        && mine.clutter.len() == t.clutter.len()
        && mine.clutter.iter().all(|m| {
            let mut m = m.clone();
            m.sort_unstable();
            t.clutter.iter().any(|o| {
                let mut o = o.clone();
                o.sort_unstable();
                o == m
            })
        })
}

// 1
fn min_cut_oracle() -> Outcome {
    let mut r = rng(11);
    for i in 0..100 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(0..=14);
        let mut triples = Vec::new();
        let mut ends = Vec::new();
        for e in 0..m {
            let a = r.gen_range(0..n);
            let mut b = r.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            triples.push((format!("e{e:02}"), format!("n{a}"), format!("n{b}")));
            ends.push((a, b));
        }
        let g = lib(Multigraph::new((0..n).map(|v| format!("n{v}")), triples))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let ns = r.gen_range(1..n);
        let nt = r.gen_range(1..=n - ns);
        let (sources, sinks) = (&order[..ns], &order[ns..ns + nt]);
        let cut = lib(max_flow(&g, sources, sinks))?;
        let brute = oracle::brute_min_cut(n, &ends, sources, sinks);
        ensure(cut.value == brute, || format!("graph {i}: max flow {} but the smallest cut has {brute} edges", cut.value))?;
        let side: u32 = cut.source_side.iter().map(|&v| 1u32 << v).sum();
        ensure(
            cut.cut_edges.len() == cut.value
                && oracle::cut_size(&ends, side) == cut.value
                && sources.iter().all(|&s| side >> s & 1 == 1)
                && sinks.iter().all(|&t| side >> t & 1 == 0),
            || format!("graph {i}: cut witness does not separate with {} edges", cut.value),
        )?;
    }
    Ok("100 graphs, max flow equals the smallest enumerated cut".into())
}

// 2
fn lovasz_cherkassky() -> Outcome {
    let mut done = 0;
    let mut seed = 0;
    while done < 50 {
        seed += 1;
        let mut r = rng(3_000 + seed);
        let terminals = r.gen_range(2..=5);
        let nodes = r.gen_range(terminals.max(3)..=8);
        let edges = r.gen_range(nodes..=11);
        let params = GenParams { nodes, terminals, edges, clutter_density: 0.0, seed, ..GenParams::default() };
        let net = generate(&params).expect("generator");
        if net.graph().edge_count() > 14 {
            continue;
        }
        assert!(net.clutter().is_empty() && net.is_eulerian());
        let plain = Plain::of(&net);
        let cuts = Cuts::new(&plain);
        let half = oracle::half_lambda_sum(&plain, &cuts);
        let size = lib(eta(&net, &limits()))?;
        let dp = oracle::optima(&plain).size;
        ensure(
            Rational::from_integer(size as i128) == half && Rational::from_integer(dp as i128) == half,
            || format!("seed {seed}: solver size {size}, oracle size {dp}, ½Σλ = {}", fmt(&half)),
        )?;
        done += 1;
    }
    Ok("50 instances, maximum size equals ½Σλ(t)".into())
}

// 3
fn phi_upper_bound(cases: &[FlatCase], rejected: usize) -> Outcome {
    let mut pairs = 0;
    for c in cases {
        let plain = Plain::of(&c.net);
        let e = lib(eta(&c.net, &limits()))?;
        let oe = oracle::eta(&plain);
        ensure(e == oe, || format!("seed {}: solver η {e}, oracle η {oe}", c.seed))?;
        let eta = Rational::from_integer(e as i128);
        let mut oracle_phi = BTreeMap::new();
        for (xi, x) in c.xs.iter().enumerate() {
            let base = contracted(&c.net, &plain, x);
            let cuts = Cuts::new(&base);
            for (ri, r) in c.exts.iter().enumerate() {
                let with_r = base.with_clutter(oracle::contract(&plain.with_clutter(r.members().to_vec()), &oracle::owners(&c.net, x)).clutter);
                let v = oracle::phi(&with_r, &cuts).ok_or_else(|| format!("seed {}: oracle β not integral", c.seed))?;
                oracle_phi.insert((ri, xi), v);
            }
        }
        for (v, ri, xi) in &c.phi {
            let ov = oracle_phi[&(*ri, *xi)];
            ensure(*v == ov, || format!("seed {}: R #{ri}, X #{xi}: φ {} but oracle {}", c.seed, fmt(v), fmt(&ov)))?;
            ensure(*v >= eta, || format!("seed {}: R #{ri}, X #{xi}: φ {} < η {}", c.seed, fmt(v), fmt(&eta)))?;
            pairs += 1;
        }
    }
    Ok(format!("{} instances ({rejected} rejected for half-integral β), {pairs} (R, X) pairs", cases.len()))
}

fn corpus_dir() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

// 4
fn phi_equality(cases: &[FlatCase]) -> Outcome {
    let mut integral = 0;
    for c in cases {
        if !lib(integrality(&c.net, &limits()))? {
            continue;
        }
        integral += 1;
        let e = oracle::eta(&Plain::of(&c.net));
        let min = c.phi.iter().map(|t| t.0).min().unwrap();
        ensure(min == Rational::from_integer(e as i128), || {
            format!("seed {}: min φ {} but η {e}", c.seed, fmt(&min))
        })?;
    }
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(corpus_dir().join("expected.json")).unwrap()).unwrap();
    let want = [("path-join", 1), ("triangle", 2), ("parallel3", 3), ("star4", 2)];
    for (name, value) in want {
        let net = lib(parse_network(&std::fs::read_to_string(corpus_dir().join(format!("{name}.json"))).unwrap()))?;
        let exts = lib(enumerate_flat_extensions(net.clutter()))?;
        let xs = lib(enumerate_expansions(&net, &ExpansionBounds::default()))?;
        let min = lib(phi_table(&net, &exts, &xs))?.into_iter().map(|t| t.0).min().unwrap();
        let e = lib(eta(&net, &limits()))?;
        let oe = oracle::eta(&Plain::of(&net));
        let v = Rational::from_integer(value);
        ensure(min == v && e as i128 == value && oe as i128 == value, || {
            format!("{name}: η {e}, oracle η {oe}, min φ {}, want {value}", fmt(&min))
        })?;
        let recorded = &expected[name];
        ensure(recorded["eta"] == value as i64 && recorded["minPhi"] == fmt(&v), || {
            format!("{name}: expected.json disagrees: {recorded}")
        })?;
    }
    Ok(format!("{integral} integral instances and 4 fixtures with min φ = η"))
}

// 5
fn monotonicity(cases: &[FlatCase]) -> Outcome {
    let mut pairs = 0;
    for c in cases {
        let plain = Plain::of(&c.net);
        let e0 = lib(eta(&c.net, &limits()))?;
        let etas = lib(expanded_etas(&c.net, &c.exts, &c.xs, &limits()))?;
        let mut per_x: BTreeMap<usize, (Plain, Vec<oracle::SimplePath>)> = BTreeMap::new();
        for (ri, xi, e) in etas {
            ensure(e >= e0, || format!("seed {}: R #{ri}, X #{xi}: η {e} < {e0}", c.seed))?;
            let (base, paths) = per_x.entry(xi).or_insert_with(|| {
                let b = contracted(&c.net, &plain, &c.xs[xi]);
                let p = oracle::simple_paths(&b);
                (b, p)
            });
            let r_clutter = oracle::contract(&plain.with_clutter(c.exts[ri].members().to_vec()), &oracle::owners(&c.net, &c.xs[xi])).clutter;
            let with_r = base.with_clutter(r_clutter);
            let oe = oracle::best_packing(with_r.edges.len(), paths, |q| (with_r.class(q.ends.0, q.ends.1) == 0) as i64);
            ensure(oe == e, || format!("seed {}: R #{ri}, X #{xi}: solver η {e}, oracle η {oe}", c.seed))?;
            pairs += 1;
        }
    }
    Ok(format!("{} instances, {pairs} (R, X) pairs, expanded η never below η", cases.len()))
}

// 6
fn common_solution_check(cases: &[FlatCase]) -> Outcome {
    for c in cases {
        let plain = Plain::of(&c.net);
        let opt = oracle::optima(&plain);
        let sol = lib(common_solution(&c.net, &limits()))?;
        let f = &sol.witness;
        let problems = oracle::flow_problems(&plain, f);
        ensure(problems.is_empty() && f.is_integer(), || format!("seed {}: {}", c.seed, problems.join("; ")))?;
        let theta = oracle::theta(&plain, f);
        let strong = oracle::class_weight(&plain, f, 0);
        ensure(
            theta == Rational::new(opt.theta2 as i128, 2) && strong == Rational::from_integer(opt.eta as i128),
            || {
                format!(
                    "seed {}: Θ {} vs θ {}/2, f[S] {} vs η {}",
                    c.seed,
                    fmt(&theta),
                    opt.theta2,
                    fmt(&strong),
                    opt.eta
                )
            },
        )?;
    }
    Ok(format!("{} instances, one multiflow optimal for both problems", cases.len()))
}

// 7
fn weak_max_min(instances: &[(u64, Network)]) -> Outcome {
    let mut expansions = 0;
    for (seed, net) in instances {
        let plain = Plain::of(net);
        let xs = lib(enumerate_expansions(net, &ExpansionBounds::default()))?;
        let (theta, theta_fr, rows) = lib(weak_dual_table(net, &xs, &limits()))?;
        let otheta = Rational::new(oracle::optima(&plain).theta2 as i128, 2);
        ensure(theta == otheta, || format!("seed {seed}: θ {} but oracle {}", fmt(&theta), fmt(&otheta)))?;
        let mut min = None::<Rational>;
        for (i, (x, row)) in xs.iter().zip(&rows).enumerate() {
            let base = contracted(net, &plain, x);
            let ex = lib(expand(net, x))?;
            ensure(same_contraction(&base, &ex.network), || format!("seed {seed}: X #{i}: contractions differ"))?;
            let dual = oracle::weak_dual(&base, &Cuts::new(&base));
            ensure(dual == row.dual_value, || {
                format!("seed {seed}: X #{i}: dual value {} but oracle {}", fmt(&row.dual_value), fmt(&dual))
            })?;
            ensure(
                otheta <= theta_fr && theta_fr <= row.theta_fr_expanded && row.theta_fr_expanded <= dual,
                || format!("seed {seed}: X #{i}: chain broken: {row:?}"),
            )?;
            min = Some(min.map_or(dual, |m| m.min(dual)));
            expansions += 1;
        }
        let min = min.unwrap();
        ensure(min == theta_fr, || format!("seed {seed}: θ^FR {} but min dual value {}", fmt(&theta_fr), fmt(&min)))?;
        let (value, f) = lib(maximum_weak_flow(net, &limits()))?;
        let problems = oracle::flow_problems(&plain, &f);
        let witnessed = oracle::theta(&plain, &f);
        ensure(problems.is_empty() && witnessed == min && value == min, || {
            format!("seed {seed}: witness Θ {} vs min dual {}; {}", fmt(&witnessed), fmt(&min), problems.join("; "))
        })?;
    }
    Ok(format!("{} instances, {expansions} expansions, θ^FR = min dual value", instances.len()))
}

// 8
fn locking(instances: &[(u64, Network)]) -> Outcome {
    let mut sets = 0;
    let mut critical = 0;
    for (seed, net) in instances {
        let plain = Plain::of(net);
        let (x, _) = lib(minimal_dual_solution(net, &limits()))?;
        let ev = lib(locking_evidence(net, &x, &cfg()))?;
        let base = contracted(net, &plain, &x);
        let cuts = Cuts::new(&base);
        let dual = oracle::weak_dual(&base, &cuts);
        ensure(dual == ev.theta_fr && ev.dual_value == ev.theta_fr, || {
            format!("seed {seed}: minimal expansion has dual value {} but θ^FR {}", fmt(&dual), fmt(&ev.theta_fr))
        })?;
        // θ^FR of a network expanded by Y is the least dual value over Z ⪰ Y
        let xs = lib(enumerate_expansions(net, &ExpansionBounds::default()))?;
        let duals: Vec<Rational> =
            xs.iter().map(|z| {
                let b = contracted(net, &plain, z);
                oracle::weak_dual(&b, &Cuts::new(&b))
            }).collect();
        let oracle_theta = |y: &Expansion| {
            xs.iter().zip(&duals).filter(|(z, _)| y.precedes(z)).map(|(_, d)| *d).min().unwrap()
        };
        let thetas = lib(expanded_fractional_thetas(net, &xs, &limits()))?;
        let theta_x = oracle_theta(&x);
        ensure(theta_x == ev.theta_fr_expanded && theta_x == ev.theta_fr, || {
            format!("seed {seed}: θ^FR_X {} (oracle {}) but θ^FR {}", fmt(&ev.theta_fr_expanded), fmt(&theta_x), fmt(&ev.theta_fr))
        })?;
        // Criticality is reported, not required: the saturation construction
        // can leave a strict enlargement with the same θ.
        let mut oracle_critical = true;
        for (y, ty) in xs.iter().zip(&thetas) {
            if x.strictly_precedes(y) {
                let oy = oracle_theta(y);
                ensure(oy == *ty, || format!("seed {seed}: enlargement θ^FR {} but oracle {}", fmt(ty), fmt(&oy)))?;
                oracle_critical &= oy > theta_x;
            }
        }
        ensure(ev.critical == oracle_critical, || {
            format!("seed {seed}: library criticality {} but oracle {oracle_critical}", ev.critical)
        })?;
        critical += usize::from(oracle_critical);
        for i in dual_solution_indices(&xs, &thetas, ev.theta_fr) {
            ensure(x.precedes(&xs[i]), || format!("seed {seed}: dual solution #{i} does not contain the minimal one"))?;
        }
        let ex = lib(expand(net, &x))?;
        ensure(same_contraction(&base, &ex.network), || format!("seed {seed}: contractions differ"))?;
        let (_, h) = ev.locking_witness.clone().ok_or_else(|| format!("seed {seed}: no locking witness"))?;
        let problems = oracle::flow_problems(&base, &h);
        let th = oracle::theta(&base, &h);
        ensure(problems.is_empty() && th == dual, || {
            format!("seed {seed}: witness Θ {} vs dual {}; {}", fmt(&th), fmt(&dual), problems.join("; "))
        })?;
        let mut locked_sets: Vec<Vec<usize>> = base.terminals.iter().map(|&t| vec![t]).collect();
        locked_sets.extend(base.clutter.iter().filter(|m| m.len() < base.terminals.len()).cloned());
        for a in &locked_sets {
            let carried = oracle::crossing_after_cutting(&base, &h, a);
            let lam = Rational::from_integer(cuts.lambda(a) as i128);
            ensure(carried == lam, || format!("seed {seed}: set {a:?} carries {} of λ = {}", fmt(&carried), fmt(&lam)))?;
        }
        for (names, locked, seq) in &ev.sequence_checks {
            ensure(locked != seq, || {
                format!("seed {seed}: {{{}}} locked = {locked} but augmenting sequence found = {seq}", names.join(","))
            })?;
            sets += 1;
        }
    }
    Ok(format!(
        "{} minimal dual solutions ({critical} critical), {sets} sets checked against augmenting sequences",
        instances.len()
    ))
}

// 9
fn b_matching_oracle() -> Outcome {
    let mut r = rng(99);
    for i in 0..200 {
        let blocks = r.gen_range(2..=5);
        let count = r.gen_range(0..=6);
        let ends: Vec<(usize, usize)> = (0..count)
            .map(|_| {
                let a = r.gen_range(0..blocks);
                let mut b = r.gen_range(0..blocks - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            })
            .collect();
        let b: Vec<u64> = (0..count).map(|_| r.gen_range(0..=3)).collect();
        let lg = oracle::line_graph(&ends);
        let m = lib(max_b_matching(&b, &lg))?;
        let brute = oracle::exhaustive_b_matching(&b, &lg);
        let mut load = vec![0u64; b.len()];
        for &(k, x) in &m.picks {
            load[lg[k].0] += x;
            load[lg[k].1] += x;
        }
        ensure(m.value == brute, || format!("instance {i}: reduction {} vs exhaustive {brute}", m.value))?;
        ensure(
            load.iter().zip(&b).all(|(l, c)| l <= c) && m.picks.iter().map(|p| p.1).sum::<u64>() == m.value,
            || format!("instance {i}: picks are not a b-matching of value {}", m.value),
        )?;
    }
    Ok("200 instances, reduction equals exhaustive search".into())
}

// 10
fn path_operations() -> Outcome {
    let sw = switching_properties()?;
    let th = three_halves_identity()?;
    let hat = hat_idempotence()?;
    let split = split_round_trip()?;
    Ok(format!("{sw}; {th}; {hat}; {split}"))
}

fn is_member_path(m: &[usize], (a, b): (usize, usize)) -> bool {
    m.contains(&a) && m.contains(&b)
}

fn is_outside(m: &[usize], (a, b): (usize, usize)) -> bool {
    !m.contains(&a) && !m.contains(&b)
}

fn is_across(m: &[usize], (a, b): (usize, usize)) -> bool {
    m.contains(&a) != m.contains(&b)
}

fn shared_inner(plain: &Plain, p: &TPath, q: &TPath) -> Vec<usize> {
    let (pn, qn) = (p.nodes(), q.nodes());
    let mut out: Vec<usize> = pn[1..pn.len() - 1]
        .iter()
        .copied()
        .filter(|&v| !plain.is_terminal(v) && qn[1..qn.len() - 1].contains(&v))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn canonical(nodes: &[usize]) -> Vec<usize> {
    let rev: Vec<usize> = nodes.iter().rev().copied().collect();
    rev.min(nodes.to_vec())
}

/// Checks the four switching properties (member/non-member cross, member
/// cross, one shared end, member/across at degree 4) on every qualifying pair
/// of paths of the weak-optimal flow `f`, and returns the Θ-preserving
/// switches as further weak-optimal flows.
fn switching_configurations(
    label: &str,
    net: &Network,
    plain: &Plain,
    f: &Multiflow,
    seen: &mut HashSet<(Vec<usize>, Vec<usize>, usize)>,
    counts: &mut [usize; 4],
    both_preserved: &mut usize,
) -> std::result::Result<Vec<Multiflow>, String> {
    let theta = oracle::theta(plain, f);
    let mut next = Vec::new();
    let fps = f.paths();
    for i in 0..fps.len() {
        for j in 0..fps.len() {
            if i == j || fps[i].weight != fps[j].weight {
                continue;
            }
            let (p, q) = (&fps[i].path, &fps[j].path);
            let (pe, qe) = (oracle::ends_of(&fps[i]), oracle::ends_of(&fps[j]));
            let cross = pe.0 != qe.0 && pe.0 != qe.1 && pe.1 != qe.0 && pe.1 != qe.1;
            let common = [pe.0, pe.1].iter().filter(|&&v| v == qe.0 || v == qe.1).count();
            let k = &plain.clutter;
            let p1 = cross && k.iter().any(|m| is_member_path(m, pe) && is_outside(m, qe));
            let p2 = i < j && cross && k.iter().any(|m| is_member_path(m, pe) && is_member_path(m, qe));
            let p3 = i < j
                && common == 1
                && k.iter().enumerate().any(|(a, ma)| {
                    is_member_path(ma, pe) && k.iter().enumerate().any(|(b, mb)| a != b && is_member_path(mb, qe))
                });
            let p4 = k.iter().any(|m| is_member_path(m, pe) && is_across(m, qe));
            for x in shared_inner(plain, p, q) {
                let mut preserved = 0;
                for variant in SwitchVariant::ALL {
                    let s = lib(switch(net, f, p, q, x, variant))?;
                    let problems = oracle::flow_problems(plain, &s.flow);
                    ensure(problems.is_empty(), || format!("{label}: switch broke the flow: {problems:?}"))?;
                    if oracle::theta(plain, &s.flow) == theta {
                        preserved += 1;
                        next.push(s.flow);
                    }
                }
                if !(p1 || p2 || p3 || p4) || !seen.insert((canonical(p.nodes()), canonical(q.nodes()), x)) {
                    continue;
                }
                let describe = || format!("{label}: paths {pe:?} and {qe:?} at node {x}: {preserved} of 2 switches keep Θ");
                for (slot, applies) in [p1, p2, p3].into_iter().enumerate() {
                    if applies {
                        ensure(preserved == 2, describe)?;
                        counts[slot] += 1;
                    }
                }
                if p4 && plain.degree(x) == 4 {
                    // the unswitched pair counts as one of the three configurations
                    ensure(preserved >= 1, describe)?;
                    counts[3] += 1;
                    *both_preserved += (preserved == 2) as usize;
                }
            }
        }
    }
    Ok(next)
}

const GADGET_TERMINALS: [&str; 5] = ["s", "t", "p", "q", "u"];

/// A random simple K-clutter of two- and three-element members on the
/// gadget terminals. Half of them are stars, the clutters that admit
/// crossing member and non-member paths in a weak-optimal flow.
fn gadget_clutter(r: &mut ChaCha8Rng) -> Vec<Vec<&'static str>> {
    loop {
        let members: Vec<Vec<&str>> = if r.gen_bool(0.5) {
            let mut order = GADGET_TERMINALS;
            order.shuffle(r);
            let leaves = r.gen_range(2..=4);
            (1..=leaves).map(|i| vec![order[0], order[i]]).collect()
        } else {
            (0..r.gen_range(1..=4))
                .map(|_| {
                    let size = r.gen_range(2..=3);
                    let mut m: Vec<&str> = GADGET_TERMINALS.choose_multiple(r, size).copied().collect();
                    m.sort_unstable();
                    m
                })
                .collect()
        };
        let count = members.len();
        let refs: Vec<&[&str]> = members.iter().map(|m| m.as_slice()).collect();
        if let Ok(net) = network_from_literals(&GADGET_TERMINALS, &[], &refs) {
            let k = net.clutter();
            if k.len() == count && k.is_antichain() && k.is_simple() && k.satisfies_k_condition() {
                return members;
            }
        }
    }
}

/// Two paths crossing at an inner node `x`, with random ends, random
/// subdivisions, a few extra terminal-to-terminal paths and a random simple
/// K-clutter. Only gadgets whose path set is weak-optimal are returned.
fn crossing_gadget(r: &mut ChaCha8Rng) -> std::result::Result<Option<(Network, Multiflow)>, String> {
    let pick = |r: &mut ChaCha8Rng| {
        let v: Vec<&str> = GADGET_TERMINALS.choose_multiple(r, 2).copied().collect();
        (v[0], v[1])
    };
    let (a, b) = pick(r);
    let (c, d) = pick(r);
    let mut edges = Vec::new();
    let mut routes = Vec::new();
    // each route is its start terminal and the range of its edges
    for (k, (from, to)) in [(a, b), (c, d)].into_iter().enumerate() {
        let first = edges.len();
        chain(r, from, "x", &format!("i{k}_"), &mut edges);
        chain(r, "x", to, &format!("o{k}_"), &mut edges);
        routes.push((from, first..edges.len()));
    }
    for k in 0..r.gen_range(0..=2) {
        let (from, to) = pick(r);
        let first = edges.len();
        chain(r, from, to, &format!("e{k}_"), &mut edges);
        routes.push((from, first..edges.len()));
    }
    if edges.len() > 12 {
        return Ok(None);
    }
    let clutter = gadget_clutter(r);
    let clutter_refs: Vec<&[&str]> = clutter.iter().map(|m| m.as_slice()).collect();
    let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let net = lib(network_from_literals(&GADGET_TERMINALS, &edge_refs, &clutter_refs))?;
    let parts = routes
        .iter()
        .map(|(from, range)| {
            let start = net.graph().node(from).unwrap();
            Ok((lib(TPath::from_edges(&net, start, range.clone().collect()))?, Rational::from_integer(1)))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    let f = lib(Multiflow::new(&net, parts))?;
    let plain = Plain::of(&net);
    let optimal = oracle::theta(&plain, &f) * 2 == Rational::from_integer(oracle::optima(&plain).theta2 as i128);
    Ok(optimal.then_some((net, f)))
}

/// Walks through weak-optimal flows of simple K-networks by Θ-preserving
/// switches, starting from a solver optimum, and checks every pair of paths
/// met along the way.
fn switching_properties() -> std::result::Result<String, String> {
    let mut counts = [0usize; 4];
    let mut both_preserved = 0;
    let mut flows = 0;
    let mut batch = 0u64;
    let mut r = rng(4242);
    let mut gadgets = 0;
    while counts.iter().any(|&c| c < 100) {
        ensure(batch < 40, || format!("too few configurations after {batch} batches: {counts:?}"))?;
        for _ in 0..300 {
            if let Some((net, f)) = crossing_gadget(&mut r)? {
                let plain = Plain::of(&net);
                let mut seen = HashSet::new();
                switching_configurations(&format!("gadget {gadgets}"), &net, &plain, &f, &mut seen, &mut counts, &mut both_preserved)?;
                gadgets += 1;
            }
        }
        for (seed, net) in simple_k_instances(50, batch * 1_000_000) {
            let plain = Plain::of(&net);
            let paths = lib(enumerate_paths(&net, &limits()))?;
            let (_, mut f) = lib(solve_integer_with(&net, &paths, Objective::Weak))?;
            let theta = oracle::theta(&plain, &f);
            ensure(theta * 2 == Rational::from_integer(oracle::optima(&plain).theta2 as i128), || {
                format!("seed {seed}: solver flow is not weak-optimal")
            })?;
            let mut seen = HashSet::new();
            for _ in 0..12 {
                let next = switching_configurations(&format!("seed {seed}"), &net, &plain, &f, &mut seen, &mut counts, &mut both_preserved)?;
                flows += 1;
                if next.is_empty() {
                    break;
                }
                f = next[r.gen_range(0..next.len())].clone();
            }
        }
        batch += 1;
    }
    Ok(format!(
        "{gadgets} weak-optimal crossing gadgets and {flows} weak-optimal flows, switching configurations: member/non-member cross {}, member cross {}, one shared end {}, member/across at degree 4 {} ({both_preserved} with both switches Θ-preserving)",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn chain(r: &mut ChaCha8Rng, from: &str, to: &str, label: &str, edges: &mut Vec<(String, String)>) -> Vec<String> {
    let len = r.gen_range(0..=2);
    let mut nodes = vec![from.to_string()];
    for k in 0..len {
        nodes.push(format!("{label}{k}"));
    }
    nodes.push(to.to_string());
    for w in nodes.windows(2) {
        edges.push((w[0].clone(), w[1].clone()));
    }
    nodes
}

fn names(v: &[String]) -> Vec<&str> {
    v.iter().map(|s| s.as_str()).collect()
}

fn three_halves_identity() -> std::result::Result<String, String> {
    let mut r = rng(77);
    let (mut total, mut pattern) = (0, 0);
    while total < 200 || pattern < 100 {
        let mut edges = Vec::new();
        let mut p0 = chain(&mut r, "s", "x0", "a", &mut edges);
        p0.extend(chain(&mut r, "x0", "t", "b", &mut edges).into_iter().skip(1));
        let mut p1 = chain(&mut r, "q", "x0", "c", &mut edges);
        p1.extend(chain(&mut r, "x0", "r", "d", &mut edges).into_iter().skip(1));
        let extra = r.gen_bool(0.5);
        let p2 = if extra { chain(&mut r, "s", "q", "e", &mut edges) } else { Vec::new() };
        let with_pattern = r.gen_bool(0.6);
        let clutter: Vec<Vec<&str>> = if with_pattern {
            vec![vec!["s", "t"], vec!["q", "s"], vec!["r", "s"]]
        } else {
            let all = [vec!["s", "t"], vec!["q", "r"], vec!["q", "t"], vec!["r", "t", "s"], vec!["q", "s"]];
            all.into_iter().filter(|_| r.gen_bool(0.4)).collect()
        };
        let clutter_refs: Vec<&[&str]> = clutter.iter().map(|m| m.as_slice()).collect();
        let edge_refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let net = match network_from_literals(&["s", "t", "q", "r"], &edge_refs, &clutter_refs) {
            Ok(n) => n,
            Err(_) => continue,
        };
        let orient = |v: Vec<String>, flip: bool| if flip { v.into_iter().rev().collect() } else { v };
        let flip0 = !with_pattern && r.gen_bool(0.5);
        let flip1 = r.gen_bool(0.5);
        let tp0 = lib(TPath::from_node_names(&net, &names(&orient(p0, flip0))))?;
        let tp1 = lib(TPath::from_node_names(&net, &names(&orient(p1, flip1))))?;
        let eighths = |r: &mut ChaCha8Rng| Rational::new(r.gen_range(1..=8), 8);
        let (alpha, beta) = (eighths(&mut r), eighths(&mut r));
        let mut parts = vec![(tp0.clone(), alpha), (tp1.clone(), beta)];
        if extra {
            parts.push((lib(TPath::from_node_names(&net, &names(&p2)))?, eighths(&mut r)));
        }
        let f = lib(Multiflow::new(&net, parts))?;
        let bound = alpha.min(beta * 2);
        let steps = (bound * 16).to_integer();
        let eps = Rational::new(r.gen_range(1..=steps), 16);
        let x0 = net.graph().node("x0").unwrap();
        let g = lib(three_halves(&net, &f, &tp0, &tp1, x0, eps))?;
        let plain = Plain::of(&net);
        let problems = oracle::flow_problems(&plain, &g);
        ensure(problems.is_empty(), || format!("3/2-operation broke the flow: {problems:?}"))?;
        ensure(oracle::size(&g) == oracle::size(&f) - eps / 2, || {
            format!("|f'| = {} but |f| − ε/2 = {}", fmt(&oracle::size(&g)), fmt(&(oracle::size(&f) - eps / 2)))
        })?;
        total += 1;
        if with_pattern {
            let w_before = oracle::class_weight(&plain, &f, 1);
            let w_after = oracle::class_weight(&plain, &g, 1);
            ensure(oracle::theta(&plain, &g) == oracle::theta(&plain, &f) && w_after == w_before - eps, || {
                format!(
                    "Θ {} → {}, f[W] {} → {} with ε = {}",
                    fmt(&oracle::theta(&plain, &f)),
                    fmt(&oracle::theta(&plain, &g)),
                    fmt(&w_before),
                    fmt(&w_after),
                    fmt(&eps)
                )
            })?;
            pattern += 1;
        }
    }
    Ok(format!("3/2-operation {total} configurations ({pattern} with the S/W pattern)"))
}

/// Canonical `(edges, weight)` list of a multiflow, orientation ignored.
fn signature(f: &Multiflow) -> Vec<(Vec<usize>, Rational)> {
    let mut out: Vec<(Vec<usize>, Rational)> = f
        .paths()
        .iter()
        .map(|fp| {
            let e = fp.path.edges().to_vec();
            let rev: Vec<usize> = e.iter().rev().copied().collect();
            (e.min(rev), fp.weight)
        })
        .collect();
    out.sort();
    out
}

fn usage(m: usize, f: &Multiflow) -> Vec<Rational> {
    let mut u = vec![Rational::from_integer(0); m];
    for fp in f.paths() {
        for &e in fp.path.edges() {
            u[e] += fp.weight;
        }
    }
    u
}

fn random_packing(r: &mut ChaCha8Rng, net: &Network, paths: &[TPath], fractional: bool) -> Multiflow {
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.shuffle(r);
    let mut used = vec![false; net.graph().edge_count()];
    let mut parts = Vec::new();
    for i in order {
        let p = &paths[i];
        if p.edges().iter().any(|&e| used[e]) {
            continue;
        }
        for &e in p.edges() {
            used[e] = true;
        }
        let w = if fractional { Rational::new(r.gen_range(1..=4), 4) } else { Rational::from_integer(1) };
        parts.push((p.clone(), w));
    }
    Multiflow::new(net, parts).expect("disjoint paths")
}

fn hat_idempotence() -> std::result::Result<String, String> {
    let mut r = rng(55);
    let (mut total, mut compound) = (0, 0);
    let mut seed = 0;
    while total < 150 || compound < 100 {
        seed += 1;
        ensure(seed < 5_000, || format!("only {compound} configurations with compound paths"))?;
        let terminals = r.gen_range(3..=5);
        let params = GenParams {
            nodes: r.gen_range(terminals + 1..=7),
            terminals,
            edges: r.gen_range(6..=10),
            seed,
            ensure_flat: r.gen_bool(0.5),
            ..GenParams::default()
        };
        let net = generate(&params).expect("generator");
        if net.graph().edge_count() > 12 {
            continue;
        }
        let plain = Plain::of(&net);
        let paths = lib(enumerate_paths(&net, &limits()))?;
        let f = random_packing(&mut r, &net, &paths, true);
        let h = f.hat(&net);
        let has_compound = f.paths().iter().any(|fp| {
            let n = fp.path.nodes();
            n[1..n.len() - 1].iter().any(|&v| plain.is_terminal(v))
        });
        ensure(signature(&h.hat(&net)) == signature(&h), || format!("seed {seed}: hat is not idempotent"))?;
        let m = plain.edges.len();
        ensure(usage(m, &h) == usage(m, &f) && oracle::size(&h) >= oracle::size(&f), || {
            format!("seed {seed}: hat changed edge usage or shrank the flow")
        })?;
        let mut pieces: Vec<(Vec<usize>, Rational)> = Vec::new();
        for fp in f.paths() {
            for (_, e) in oracle::terminal_pieces(&plain, fp.path.nodes(), fp.path.edges()) {
                let rev: Vec<usize> = e.iter().rev().copied().collect();
                pieces.push((e.min(rev), fp.weight));
            }
        }
        pieces.sort();
        let mut merged: Vec<(Vec<usize>, Rational)> = Vec::new();
        for (e, w) in pieces {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += w,
                _ => merged.push((e, w)),
            }
        }
        ensure(merged == signature(&h), || format!("seed {seed}: hat pieces differ from cutting at terminals"))?;
        total += 1;
        compound += has_compound as usize;
    }
    Ok(format!("hat {total} configurations ({compound} with compound paths)"))
}

fn pairing_keeps(f: &Multiflow, x: usize, pairing: &Pairing) -> bool {
    f.paths().iter().all(|fp| {
        let (n, e) = (fp.path.nodes(), fp.path.edges());
        (1..n.len() - 1).filter(|&i| n[i] == x).all(|i| {
            let (a, b) = (e[i - 1], e[i]);
            pairing.iter().any(|p| (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a))
        })
    })
}

fn split_round_trip() -> std::result::Result<String, String> {
    let mut r = rng(33);
    let mut total = 0;
    let mut seed = 0;
    while total < 120 {
        seed += 1;
        ensure(seed < 5_000, || format!("only {total} split configurations"))?;
        let terminals = r.gen_range(2..=4);
        let params = GenParams {
            nodes: r.gen_range(terminals + 1..=7),
            terminals,
            edges: r.gen_range(6..=11),
            seed,
            ..GenParams::default()
        };
        let net = generate(&params).expect("generator");
        if net.graph().edge_count() > 12 {
            continue;
        }
        let plain = Plain::of(&net);
        let paths = lib(enumerate_paths(&net, &limits()))?;
        let f = random_packing(&mut r, &net, &paths, false);
        for x in net.inner_nodes() {
            if plain.degree(x) != 4 {
                continue;
            }
            for pairing in lib(pairings(&net, x))? {
                let keeps = pairing_keeps(&f, x, &pairing);
                ensure(keeps == preserves_paths(&net, &f, x, &pairing), || {
                    format!("seed {seed}: path preservation misjudged at node {x}")
                })?;
                if !keeps {
                    continue;
                }
                let (outcome, h) = match split_multiflow(&net, &f, x, &pairing) {
                    Ok(v) => v,
                    Err(Error::Precondition(_)) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                let split = Plain::of(&outcome.network);
                let problems = oracle::flow_problems(&split, &h);
                ensure(problems.is_empty(), || format!("seed {seed}: split flow invalid: {problems:?}"))?;
                let g = net.graph();
                let ng = outcome.network.graph();
                for v in 0..g.node_count() {
                    if v == x {
                        continue;
                    }
                    let loops = outcome
                        .dropped
                        .iter()
                        .filter(|(a, _)| g.edge(g.edge_by_id(a).unwrap()).other(x) == v)
                        .count();
                    let nv = ng.node(g.name(v)).unwrap();
                    ensure(split.degree(nv) + 2 * loops == plain.degree(v), || {
                        format!("seed {seed}: degree of {} changed by the split", g.name(v))
                    })?;
                }
                let back = lib(restore_split(&net, &outcome, &h))?;
                ensure(signature(&back) == signature(&f), || format!("seed {seed}: split then restore changed the flow"))?;
                total += 1;
            }
        }
    }
    Ok(format!("split/restore {total} configurations"))
}

// 11
fn certificate_soundness(cases: &[FlatCase]) -> Outcome {
    let mut nets: Vec<(String, Network)> = Vec::new();
    for c in cases {
        if lib(integrality(&c.net, &limits()))? {
            nets.push((format!("seed {}", c.seed), c.net.clone()));
        }
    }
    for name in ["path-join", "triangle", "parallel3", "star4"] {
        let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.json"))).unwrap();
        nets.push((name.to_string(), lib(parse_network(&text))?));
    }
    let mut r = rng(5);
    let (mut accepted, mut rejected) = (0, 0);
    for (name, net) in &nets {
        let (cert, _) = lib(search_certificate(net, &SearchBounds::default()))?;
        let paths = lib(enumerate_paths(net, &limits()))?;
        let (key, packing) = lib(solve_integer_with(net, &paths, Objective::Strong))?;
        let eta = Rational::from_integer(key[0] as i128);
        let pack = PackingFile::strong_paths(net, &packing);
        let reread = lib(CertificateFile::parse(&CertificateFile::from_certificate(&cert).to_json()))?;
        let reread = lib(reread.to_certificate())?;
        for c in [&cert, &reread] {
            let report = verify_certificate(net, c, &eta, Some(&pack.paths));
            ensure(report.passed(), || format!("{name}: valid certificate rejected: {:?}", report.failures()))?;
            accepted += 1;
        }
        let mut mutations = certificate_mutations(net, &cert);
        mutations.extend(random_mutations(&mut r, &cert));
        for (what, bad) in mutations {
            let report = verify_certificate(net, &bad, &eta, Some(&pack.paths));
            ensure(!report.passed(), || format!("{name}: mutation '{what}' accepted"))?;
            rejected += 1;
        }
    }
    Ok(format!("{accepted} valid certificates accepted, {rejected} mutations rejected"))
}

/// Seeded numeric perturbations of single fields.
fn random_mutations(r: &mut ChaCha8Rng, cert: &Certificate) -> Vec<(String, Certificate)> {
    let mut out = Vec::new();
    for _ in 0..20 {
        let mut c = cert.clone();
        let delta = {
            let mut d = 0;
            while d == 0 {
                d = r.gen_range(-3i64..=3);
            }
            d
        };
        let what = match r.gen_range(0..4) {
            0 => {
                let t = c.lambda_values.keys().nth(r.gen_range(0..c.lambda_values.len())).unwrap().clone();
                let v = c.lambda_values[&t] as i64 + delta;
                if v < 0 {
                    continue;
                }
                c.lambda_values.insert(t.clone(), v as u64);
                format!("lambda {t} to {v}")
            }
            1 if !c.beta_values.is_empty() => {
                let i = r.gen_range(0..c.beta_values.len());
                c.beta_values[i].1 += Rational::new(delta as i128, 2);
                format!("beta #{i} by {delta}/2")
            }
            2 if !c.matching.is_empty() => {
                let i = r.gen_range(0..c.matching.len());
                let v = c.matching[i].count as i64 + delta;
                if v <= 0 {
                    c.matching.remove(i);
                } else {
                    c.matching[i].count = v as u64;
                }
                format!("matching #{i} count by {delta}")
            }
            _ => {
                c.value += Rational::new(delta as i128, 2);
                format!("value by {delta}/2")
            }
        };
        out.push((what, c));
    }
    out
}

// 12
fn pivot_containment(instances: &[(u64, Network)]) -> Outcome {
    let mut solutions = 0;
    for (seed, net) in instances {
        for (i, x) in lib(dual_solutions(net, &cfg()))?.iter().enumerate() {
            let outside = lib(pivots_outside_blocks(net, x, &limits()))?;
            ensure(outside.is_empty(), || format!("seed {seed}: dual solution #{i}: pivots {outside:?} outside ∪X"))?;
            let ex = lib(expand(net, x))?;
            let en = &ex.network;
            let plain = Plain::of(en);
            let max = oracle::half_lambda_sum(&plain, &Cuts::new(&plain));
            let paths = lib(enumerate_paths(en, &limits()))?;
            let (_, int_flow) = lib(solve_integer_with(en, &paths, Objective::SizeThenWeak))?;
            let (_, lp_flow) = lib(maximum_weak_flow(en, &limits()))?;
            for f in [&int_flow, &lp_flow] {
                ensure(oracle::flow_problems(&plain, f).is_empty() && oracle::size(f) == max, || {
                    format!("seed {seed}: dual solution #{i}: solver flow is not a maximum multiflow")
                })?;
                // inner nodes of the expanded network are exactly the nodes outside ∪X
                let pivots = oracle::trident_pivots(&plain, f);
                ensure(pivots.is_empty(), || {
                    let names: Vec<&str> = pivots.iter().map(|&v| en.graph().name(v)).collect();
                    format!("seed {seed}: dual solution #{i}: trident pivots {names:?} outside ∪X")
                })?;
            }
            solutions += 1;
        }
    }
    Ok(format!("{} instances, {solutions} dual solutions, every pivot inside ∪X", instances.len()))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({secs:.1}s): {detail}");
            }
        }
    };
    report(1, "min-cut oracle", &mut min_cut_oracle);
    report(2, "maximum multiflow size with an empty clutter", &mut lovasz_cherkassky);
    let start = Instant::now();
    let (flat, rejected) = flat_cases();
    println!("flat Eulerian family built in {:.1}s", start.elapsed().as_secs_f64());
    report(3, "φ upper bound", &mut || phi_upper_bound(&flat, rejected));
    report(4, "φ equality on integral instances", &mut || phi_equality(&flat));
    report(5, "expansion monotonicity", &mut || monotonicity(&flat));
    report(6, "common solution", &mut || common_solution_check(&flat));
    let simple = simple_k_instances(50, 0);
    report(7, "weak max-min", &mut || weak_max_min(&simple));
    report(8, "locking at the minimal dual solution", &mut || locking(&simple));
    report(9, "b-matching oracle", &mut b_matching_oracle);
    report(10, "path operations", &mut path_operations);
    report(11, "certificate verification soundness", &mut || certificate_soundness(&flat));
    report(12, "pivot containment", &mut || pivot_containment(&simple));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
