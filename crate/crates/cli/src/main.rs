use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use pathpack::dual::{search_certificate, verify_certificate, SearchBounds};
use pathpack::expansion::ExpansionBounds;
use pathpack::generate::{generate, GenParams};
use pathpack::io::{multiflow_entries, network_to_json, parse_network, CertificateFile, PackingFile};
use pathpack::network::{validate_raw, Network};
use pathpack::rational::{self, Rational};
use pathpack::solvers::{self, Mode, Problem, SolverLimits, DEFAULT_MAX_EDGES};
use pathpack::theorems::{run_suites, Status, Suite, TheoremConfig};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const MAX_EDGES_VAR: &str = "PATHPACK_MAX_EDGES";
const MAX_EXPANSIONS_VAR: &str = "PATHPACK_MAX_EXPANSIONS";

#[derive(Parser)]
#[command(name = "pathpack", version, about = "Edge-disjoint S-path packing with exact dual certificates")]
struct Cli {
    /// Edge cap for exhaustive path enumeration (default from PATHPACK_MAX_EDGES).
    #[arg(long, global = true)]
    max_edges: Option<usize>,
    /// Cap on enumerated expansions (default from PATHPACK_MAX_EXPANSIONS).
    #[arg(long, global = true)]
    max_expansions: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network document for structure, parity and clutter properties.
    Validate {
        file: PathBuf,
        /// Also require a flat clutter.
        #[arg(long)]
        require_flat: bool,
    },
    /// Solve the strong or weak packing problem exactly.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "strong")]
        problem: ProblemArg,
        #[arg(long, value_enum, default_value = "integer")]
        mode: ModeArg,
    },
    /// Search for a minimum certificate φ(X, R) and an optimal packing.
    Dual {
        file: PathBuf,
        /// Assign at most this many inner nodes to blocks.
        #[arg(long)]
        max_inner: Option<usize>,
        /// Write the certificate document here.
        #[arg(long)]
        certificate_out: Option<PathBuf>,
        /// Write the optimal packing document here.
        #[arg(long)]
        packing_out: Option<PathBuf>,
    },
    /// Recompute a certificate from scratch and check a claimed η against it.
    Verify {
        file: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        packing: Option<PathBuf>,
        /// Claimed η; defaults to the packing's S-path count, else the
        /// certificate value.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Print a seeded random network document.
    Gen {
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        #[arg(long, default_value_t = 3)]
        terminals: usize,
        #[arg(long, default_value_t = 7)]
        edges: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip parity repair of inner nodes.
        #[arg(long)]
        no_eulerian: bool,
        /// Draw a general antichain instead of a triangle-free pair set.
        #[arg(long)]
        general_clutter: bool,
        /// Redraw until the weak problem is integral.
        #[arg(long)]
        integral: bool,
        /// Duplicate every edge.
        #[arg(long)]
        double_edges: bool,
        #[arg(long, default_value_t = 200)]
        max_retries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the theorem suites on a network and print a pass/fail table.
    CheckTheorems {
        file: PathBuf,
        /// Comma-separated subset of t1,t2,t5,t8,locking,pivots.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Strong,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Integer,
    Fractional,
}

/// Input the command cannot work with: exit code 2.
#[derive(Debug)]
struct Usage(anyhow::Error);

type Outcome = Result<bool, Usage>;

fn usage<E: Into<anyhow::Error>>(e: E) -> Usage {
    Usage(e.into())
}

fn env_usize(var: &str) -> Result<Option<usize>, Usage> {
    match std::env::var(var) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| usage(anyhow!("{var}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}

struct Caps {
    limits: SolverLimits,
    expansions: ExpansionBounds,
}

fn caps(cli: &Cli) -> Result<Caps, Usage> {
    let max_edges = match cli.max_edges {
        Some(v) => v,
        None => env_usize(MAX_EDGES_VAR)?.unwrap_or(DEFAULT_MAX_EDGES),
    };
    let mut expansions = ExpansionBounds::default();
    let max_expansions = match cli.max_expansions {
        Some(v) => Some(v),
        None => env_usize(MAX_EXPANSIONS_VAR)?,
    };
    if let Some(v) = max_expansions {
        expansions.max_count = v;
    }
    Ok(Caps { limits: SolverLimits { max_edges, ..SolverLimits::default() }, expansions })
}

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)
}

fn load_network(path: &Path) -> Result<Network, Usage> {
    parse_network(&read(path)?).with_context(|| format!("{}", path.display())).map_err(usage)
}

fn write(path: &Path, text: &str) -> Result<(), Usage> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())).map_err(usage)
}

/// Prints to stdout; a reader that closed the pipe early is not an error.
fn print_stdout(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(report: serde_json::Value) {
    print_stdout(&serde_json::to_string_pretty(&report).expect("reports serialize"));
}

fn cmd_validate(file: &Path, require_flat: bool) -> Outcome {
    let text = read(file)?;
    let doc = pathpack::io::NetworkFile::parse(&text).map_err(usage)?;
    let raw = match doc.to_raw() {
        Ok(raw) => raw,
        Err(e) => {
            emit(json!({ "command": "validate", "passed": false, "structural": [e.to_string()], "checks": [] }));
            eprintln!("invalid: {e}");
            return Ok(false);
        }
    };
    let report = validate_raw(&raw, require_flat);
    let passed = report.passed();
    emit(json!({
        "command": "validate",
        "passed": passed,
        "structural": report.structural,
        "checks": report.checks,
        "warnings": report.warnings,
    }));
    for s in &report.structural {
        eprintln!("structural: {s}");
    }
    for c in &report.checks {
        eprintln!("{:<28} {}", c.name, if c.passed { "pass" } else { "FAIL" });
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(passed)
}

fn cmd_solve(net: &Network, problem: ProblemArg, mode: ModeArg, caps: &Caps) -> Outcome {
    let problem = match problem {
        ProblemArg::Strong => Problem::Strong,
        ProblemArg::Weak => Problem::Weak,
    };
    let mode = match mode {
        ModeArg::Integer => Mode::Integer,
        ModeArg::Fractional => Mode::Fractional,
    };
    let result = solvers::solve(net, problem, mode, &caps.limits).map_err(usage)?;
    let f = &result.witness;
    emit(json!({
        "command": "solve",
        "problem": match problem { Problem::Strong => "strong", Problem::Weak => "weak" },
        "mode": match mode { Mode::Integer => "integer", Mode::Fractional => "fractional" },
        "objective": rational::format(&result.objective),
        "size": rational::format(&f.size()),
        "strongWeight": rational::format(&f.strong_weight(net)),
        "weakWeight": rational::format(&f.weak_weight(net)),
        "paths": multiflow_entries(net, f),
    }));
    eprintln!(
        "objective {} (≈ {:.4}), {} paths",
        rational::format(&result.objective),
        rational::approx(&result.objective),
        f.len()
    );
    Ok(true)
}

fn cmd_dual(net: &Network, max_inner: Option<usize>, cert_out: Option<&Path>, pack_out: Option<&Path>, caps: &Caps) -> Outcome {
    let mut expansions = caps.expansions;
    expansions.max_inner_assigned = max_inner;
    let (cert, value) = search_certificate(net, &SearchBounds { expansions }).map_err(usage)?;
    let strong = solvers::solve(net, Problem::Strong, Mode::Integer, &caps.limits).map_err(usage)?;
    let packing = PackingFile::strong_paths(net, &strong.witness);
    let cert_file = CertificateFile::from_certificate(&cert);
    if let Some(p) = cert_out {
        write(p, &cert_file.to_json())?;
    }
    if let Some(p) = pack_out {
        write(p, &packing.to_json())?;
    }
    let equal = value == strong.objective;
    emit(json!({
        "command": "dual",
        "eta": rational::format(&strong.objective),
        "minPhi": rational::format(&value),
        "equal": equal,
        "certificate": serde_json::to_value(&cert_file).expect("certificate serializes"),
        "packing": serde_json::to_value(&packing).expect("packing serializes"),
    }));
    eprintln!(
        "η = {}, min φ = {}{}",
        rational::format(&strong.objective),
        rational::format(&value),
        if equal { " (certified optimal)" } else { " (gap)" }
    );
    Ok(true)
}

fn cmd_verify(net: &Network, cert_path: &Path, pack_path: Option<&Path>, eta: Option<&str>) -> Outcome {
    let cert = CertificateFile::parse(&read(cert_path)?)
        .and_then(|c| c.to_certificate())
        .with_context(|| format!("{}", cert_path.display()))
        .map_err(usage)?;
    let packing = match pack_path {
        Some(p) => Some(PackingFile::parse(&read(p)?).with_context(|| format!("{}", p.display())).map_err(usage)?),
        None => None,
    };
    let claimed = match eta {
        Some(s) => rational::parse(s).map_err(|e| usage(anyhow!("--eta: {e}")))?,
        None => match &packing {
            // an invalid packing is itemised by the verifier itself
            Some(p) => pathpack::dual::packing_from_edge_ids(net, &p.paths)
                .map(|f| f.strong_weight(net))
                .unwrap_or_else(|_| Rational::from_integer(0)),
            None => cert.value,
        },
    };
    let report = verify_certificate(net, &cert, &claimed, packing.as_ref().map(|p| p.paths.as_slice()));
    let passed = report.passed();
    emit(json!({
        "command": "verify",
        "claimedEta": rational::format(&claimed),
        "passed": passed,
        "recomputedValue": report.recomputed_value,
        "checks": report.checks,
    }));
    for c in &report.checks {
        let detail = c.detail.as_deref().unwrap_or("");
        eprintln!("{:<20} {:<5} {detail}", c.name, if c.passed { "pass" } else { "FAIL" });
    }
    Ok(passed)
}

fn cmd_check_theorems(net: &Network, suites: &[String], caps: &Caps) -> Outcome {
    let chosen: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
            .iter()
            .map(|s| Suite::parse(s.trim()).ok_or_else(|| usage(anyhow!("unknown suite {s:?}"))))
            .collect::<Result<_, _>>()?
    };
    let cfg = TheoremConfig { limits: caps.limits, expansions: caps.expansions };
    let reports = run_suites(net, &chosen, &cfg);
    let passed = reports.iter().all(|r| r.status != Status::Fail);
    emit(json!({ "command": "check-theorems", "passed": passed, "suites": reports }));
    eprintln!("{:<8} {:<8} statement", "suite", "result");
    for r in &reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        eprintln!("{:<8} {:<8} {}", r.suite, status, r.anchor);
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("         {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
        }
        if let Some(n) = &r.note {
            eprintln!("         {n}");
        }
    }
    Ok(passed)
}

fn cmd_gen(params: GenParams, out: Option<&Path>) -> Outcome {
    let net = generate(&params).map_err(usage)?;
    let text = network_to_json(&net);
    match out {
        Some(p) => write(p, &(text + "\n"))?,
        None => print_stdout(&text),
    }
    eprintln!(
        "{} nodes, {} terminals, {} edges, {} clutter members, Eulerian: {}",
        net.graph().node_count(),
        net.terminals().len(),
        net.graph().edge_count(),
        net.clutter().len(),
        net.is_eulerian()
    );
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let caps = caps(&cli)?;
    match &cli.command {
        Command::Validate { file, require_flat } => cmd_validate(file, *require_flat),
        Command::Solve { file, problem, mode } => cmd_solve(&load_network(file)?, *problem, *mode, &caps),
        Command::Dual { file, max_inner, certificate_out, packing_out } => cmd_dual(
            &load_network(file)?,
            *max_inner,
            certificate_out.as_deref(),
            packing_out.as_deref(),
            &caps,
        ),
        Command::Verify { file, certificate, packing, eta } => {
            cmd_verify(&load_network(file)?, certificate, packing.as_deref(), eta.as_deref())
        }
        Command::Gen {
            nodes,
            terminals,
            edges,
            density,
            seed,
            no_eulerian,
            general_clutter,
            integral,
            double_edges,
            max_retries,
            out,
        } => cmd_gen(
            GenParams {
                nodes: *nodes,
                terminals: *terminals,
                edges: *edges,
                clutter_density: *density,
                seed: *seed,
                ensure_eulerian: !no_eulerian,
                ensure_flat: !general_clutter,
                ensure_integral: *integral,
                double_edges: *double_edges,
                max_retries: *max_retries,
                limits: caps.limits,
            },
            out.as_deref(),
        ),
        Command::CheckTheorems { file, suite } => cmd_check_theorems(&load_network(file)?, suite, &caps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
