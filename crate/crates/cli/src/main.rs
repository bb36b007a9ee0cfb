use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dglap::invariants::{bernardi, chi_geq, chi_gt, full_chromatic, potts, potts_sokal};
use dglap::space::{
    acyclic_sum, det_element, det_minor, laplace, laplace_undirected, universal_bernardi,
    universal_chi, universal_potts, universal_truncated_bernardi, universal_truncated_potts,
    vertex_subsets,
};
use dglap::verify::{self, IdentityReport, VerifyRun};
use dglap::{
    DirectedGraph, Error, Graph, GraphVector, Guards, Identity, MultiPoly, PottsRoute,
    Theorem2Reading, UndirectedGraph, VertexSet,
};

const EXIT_DIFFER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;

/// Bernardi and Potts polynomials of graphs, and exact checks of the
/// Laplace operator identities on universal graph sums.
#[derive(Parser, Debug)]
#[command(name = "dglap", version)]
struct Cli {
    /// Output format; `verify` defaults to JSON lines, the others to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    /// Largest graph space a single enumeration may visit.
    #[arg(long, global = true, default_value_t = dglap::guard::DEFAULT_MAX_GRAPHS,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_graphs: u64,

    /// Largest number of coloring or subgraph steps a batch may take.
    #[arg(long, global = true, default_value_t = dglap::guard::DEFAULT_MAX_STEPS,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomial invariant of one graph.
    Poly(PolyArgs),
    /// Universal sum over a graph space, optionally after the Laplace operator.
    Universal(UniversalArgs),
    /// Verify identities and report one JSON line per instance.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum PolyKind {
    Bernardi,
    Chromatic,
    Potts,
    PottsSokal,
    ChiGeq,
    ChiGt,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[arg(long, value_enum)]
    kind: PolyKind,
    /// Graph such as "n=3;1>2,2>3" (directed) or "n=3;1-2" (undirected).
    #[arg(long)]
    graph: String,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum UniversalKind {
    Bernardi,
    TruncatedBernardi,
    Potts,
    TruncatedPotts,
    ChiGeq,
    ChiGt,
    Det,
    DetMinor,
    AcyclicSum,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Route {
    Chromatic,
    Subgraph,
}

#[derive(Args, Debug)]
struct UniversalArgs {
    #[arg(long, value_enum)]
    kind: UniversalKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long)]
    k: usize,
    /// Vertex set such as "1,3" (isolated set for det-minor, sink set for
    /// acyclic-sum); an empty string is the empty set.
    #[arg(long)]
    subset: Option<String>,
    /// How Potts polynomials are computed.
    #[arg(long, value_enum, default_value_t = Route::Chromatic)]
    route: Route,
    /// Apply the Laplace operator to the sum.
    #[arg(long)]
    laplace: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    Undirected,
    DirectedPushforward,
    Both,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity to check: theorem1, theorem2, cor-chrom, prop-ssc, prop-ac,
    /// cor-sumall, cor-mtt, coupling, potts-oracle.
    #[arg(long, required_unless_present = "all", conflicts_with = "all",
          value_parser = parse_identity, requires_all = ["n", "k"])]
    identity: Option<Identity>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// Vertex subset for cor-mtt; all subsets when omitted.
    #[arg(long)]
    subset: Option<String>,
    /// Reading of the Potts identity.
    #[arg(long, value_enum, default_value_t = ReadingArg::Undirected)]
    reading: ReadingArg,
    /// Run every identity for all n <= n-max and k <= k-max.
    #[arg(long, requires_all = ["n_max", "k_max"])]
    all: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: Option<u64>,
    #[arg(long)]
    k_max: Option<usize>,
}

fn parse_identity(s: &str) -> Result<Identity, String> {
    match s.parse::<Identity>() {
        Ok(Identity::SignConvention) => Err("sign-convention is only reported by --all".into()),
        Ok(id) => Ok(id),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_subset(text: &str, n: usize) -> Result<VertexSet, Error> {
    let mut set = BTreeSet::new();
    for (i, part) in text.split(',').map(str::trim).enumerate() {
        if part.is_empty() && text.trim().is_empty() {
            break;
        }
        let v: usize = part
            .parse()
            .map_err(|_| Error::Parse { pos: i, msg: format!("bad vertex `{part}` in subset") })?;
        if v == 0 || v > n {
            return Err(Error::InvalidGraph(format!("vertex {v} outside 1..={n}")));
        }
        set.insert(v);
    }
    Ok(set)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let guards = Guards::new(cli.max_graphs, cli.max_steps);
    let outcome = match &cli.command {
        Command::Poly(args) => cmd_poly(args, cli.format.unwrap_or(Format::Text), &guards),
        Command::Universal(args) => cmd_universal(args, cli.format.unwrap_or(Format::Text), &guards),
        Command::Verify(args) => cmd_verify(args, cli.format.unwrap_or(Format::Json), &guards),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_guard() { EXIT_GUARD } else { EXIT_USAGE })
        }
    }
}

fn print_poly(p: &MultiPoly, args: &PolyArgs, format: Format) {
    match format {
        Format::Text => println!("{p}"),
        Format::Json => {
            let kind = args.kind.to_possible_value().expect("no skipped variants");
            let doc = serde_json::json!({
                "kind": kind.get_name(),
                "graph": args.graph,
                "polynomial": p,
            });
            println!("{doc}");
        }
    }
}

fn cmd_poly(args: &PolyArgs, format: Format, guards: &Guards) -> Result<ExitCode, Error> {
    let p = match args.kind {
        PolyKind::Bernardi | PolyKind::ChiGeq | PolyKind::ChiGt => {
            let g: DirectedGraph = args.graph.parse()?;
            match args.kind {
                PolyKind::Bernardi => bernardi(&g, guards)?,
                PolyKind::ChiGeq => chi_geq(&g, guards)?,
                _ => chi_gt(&g, guards)?,
            }
        }
        PolyKind::Chromatic | PolyKind::Potts | PolyKind::PottsSokal => {
            let g: UndirectedGraph = args.graph.parse()?;
            match args.kind {
                PolyKind::Chromatic => full_chromatic(&g, guards)?,
                PolyKind::Potts => potts(&g, guards)?,
                _ => potts_sokal(&g, guards)?,
            }
        }
    };
    print_poly(&p, args, format);
    Ok(ExitCode::SUCCESS)
}

fn print_vector<G: Graph>(v: &GraphVector<G>, format: Format) {
    match format {
        Format::Text => println!("{v}"),
        Format::Json => println!("{}", serde_json::to_string(v).expect("vectors serialize")),
    }
}

fn emit_directed(v: GraphVector<DirectedGraph>, apply: bool, format: Format) {
    print_vector(&if apply { laplace(&v) } else { v }, format);
}

fn cmd_universal(args: &UniversalArgs, format: Format, guards: &Guards) -> Result<ExitCode, Error> {
    let (n, k) = (args.n as usize, args.k);
    let subset = args.subset.as_deref().map(|s| parse_subset(s, n)).transpose()?;
    let route = match args.route {
        Route::Chromatic => PottsRoute::Chromatic,
        Route::Subgraph => PottsRoute::Subgraph,
    };
    match args.kind {
        UniversalKind::Potts | UniversalKind::TruncatedPotts => {
            let v = if matches!(args.kind, UniversalKind::Potts) {
                universal_potts(n, k, route, guards)?
            } else {
                universal_truncated_potts(n, k, route, guards)?
            };
            print_vector(&if args.laplace { laplace_undirected(&v) } else { v }, format);
        }
        UniversalKind::Bernardi => emit_directed(universal_bernardi(n, k, guards)?, args.laplace, format),
        UniversalKind::TruncatedBernardi => {
            emit_directed(universal_truncated_bernardi(n, k, guards)?, args.laplace, format)
        }
        UniversalKind::ChiGeq => emit_directed(universal_chi(n, k, false, guards)?, args.laplace, format),
        UniversalKind::ChiGt => emit_directed(universal_chi(n, k, true, guards)?, args.laplace, format),
        UniversalKind::Det => emit_directed(det_element(n, k, guards)?, args.laplace, format),
        UniversalKind::DetMinor => {
            let subset = subset.ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "det-minor needs --subset".into(),
            })?;
            emit_directed(det_minor(n, k, &subset, guards)?, args.laplace, format)
        }
        UniversalKind::AcyclicSum => {
            emit_directed(acyclic_sum(n, k, subset.as_ref(), guards)?, args.laplace, format)
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn readings(arg: ReadingArg) -> Vec<Theorem2Reading> {
    match arg {
        ReadingArg::Undirected => vec![Theorem2Reading::Undirected],
        ReadingArg::DirectedPushforward => vec![Theorem2Reading::DirectedPushforward],
        ReadingArg::Both => vec![Theorem2Reading::Undirected, Theorem2Reading::DirectedPushforward],
    }
}

fn run_single(args: &VerifyArgs, identity: Identity, guards: &Guards) -> Result<Vec<IdentityReport>, Error> {
    let n = args.n.expect("required by clap") as usize;
    let k = args.k.expect("required by clap");
    let subsets = match &args.subset {
        Some(s) => vec![parse_subset(s, n)?],
        None => vertex_subsets(n),
    };
    let mut reports = match identity {
        Identity::Theorem1 => vec![verify::verify_theorem1(n, k, guards)?],
        Identity::Theorem2 => readings(args.reading)
            .into_iter()
            .map(|r| verify::verify_theorem2(n, k, r, guards))
            .collect::<Result<_, _>>()?,
        Identity::CorChrom => vec![verify::verify_cor_chrom(n, k, guards)?],
        Identity::PropSsc => vec![verify::verify_prop_ssc(n, k, guards)?],
        Identity::PropAc => vec![verify::verify_prop_ac(n, k, guards)?],
        Identity::CorSumall => vec![verify::verify_cor_sumall(n, k, guards)?],
        Identity::CorMtt => subsets
            .iter()
            .map(|s| verify::verify_cor_mtt(n, k, s, guards))
            .collect::<Result<_, _>>()?,
        Identity::Coupling => vec![verify::verify_coupling(n, k, guards)?],
        Identity::PottsOracle => vec![verify::verify_potts_oracle(n, k, guards)?],
        Identity::SignConvention => unreachable!("rejected by the argument parser"),
    };
    // an explicitly requested reading counts toward the exit status
    if args.reading == ReadingArg::DirectedPushforward {
        reports.iter_mut().for_each(|r| r.informational = false);
    }
    Ok(reports)
}

fn describe(r: &IdentityReport) -> String {
    let mut line = format!("{} n={} k={}", r.identity, r.n, r.k);
    if let Some(s) = &r.subset {
        let items: Vec<String> = s.iter().map(ToString::to_string).collect();
        line.push_str(&format!(" I={{{}}}", items.join(",")));
    }
    if let Some(v) = &r.variant {
        line.push_str(&format!(" [{v}]"));
    }
    let status = if r.is_equal() { "equal" } else { "differ" };
    line.push_str(&format!(": {status} ({} checked, {} mismatches)", r.checked, r.mismatches));
    if let Some(sign) = r.sign {
        line.push_str(&format!(" sign {sign}"));
    }
    if r.informational {
        line.push_str(" informational");
    }
    if let Some(d) = &r.discrepancy {
        line.push_str(&format!("; first at {}: lhs {} rhs {}", d.graph, d.lhs, d.rhs));
    }
    line
}

fn cmd_verify(args: &VerifyArgs, format: Format, guards: &Guards) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let run = if args.all {
        let (n_max, k_max) = (args.n_max.expect("required by clap"), args.k_max.expect("required by clap"));
        verify::verify_all(n_max as usize, k_max, guards)?
    } else {
        let identity = args.identity.expect("required by clap");
        VerifyRun {
            reports: run_single(args, identity, guards)?,
            skipped: Vec::new(),
        }
    };
    for r in &run.reports {
        match format {
            Format::Json => println!("{}", serde_json::to_string(r).expect("reports serialize")),
            Format::Text => println!("{}", describe(r)),
        }
    }
    let equal = run.reports.iter().filter(|r| r.is_equal()).count();
    let informational = run.reports.iter().filter(|r| !r.is_equal() && r.informational).count();
    eprintln!(
        "{} reports: {equal} equal, {} failed, {informational} informational differences, {} skipped by guards ({:.2?})",
        run.reports.len(),
        run.failures(),
        run.skipped.len(),
        start.elapsed()
    );
    for (identity, n, k) in &run.skipped {
        eprintln!("skipped {identity} n={n} k={k}");
    }
    for r in run.reports.iter().filter(|r| !r.is_equal()) {
        eprintln!("{}", describe(r));
    }
    if let Some(sign) = verify::aggregate_sign(&run.reports) {
        eprintln!("sign convention across diagnosed reports: {sign}");
    }
    Ok(if run.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DIFFER)
    })
}
