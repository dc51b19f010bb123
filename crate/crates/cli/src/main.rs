//! `ghcut`: build, query, validate and benchmark Gomory-Hu trees.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ghcut::ghtree::{ghtree_fast_stats, FastStats};
use ghcut::maxflow::{measured, FlowCounters};
use ghcut::verify::NO_PAIR;
use ghcut::{gen, io, oracles, packing, verify, Error, GhTree, Graph, VertexId};

#[derive(Parser)]
#[command(name = "ghcut", version, about = "Gomory-Hu trees and all-pairs max-flow values")]
struct Cli {
    /// Worker threads for the brute-force validation oracles.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a cut tree for a graph file.
    Ghtree(GhtreeArgs),
    /// Answer max-flow queries from a tree file.
    Query(QueryArgs),
    /// Time the constructors on seeded random graphs.
    Bench(BenchArgs),
    /// Pack Steiner subgraphs and compare against the terminal mincut.
    Pack(PackArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Classic,
    Gusfield,
    Fast,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Classic => "classic",
            Algo::Gusfield => "gusfield",
            Algo::Fast => "fast",
        }
    }
}

#[derive(Args)]
struct FastArgs {
    /// Seed for the randomized constructor (falls back to GHCUT_SEED, then 0).
    #[arg(long, env = "GHCUT_SEED", default_value_t = 0)]
    seed: u64,
    /// Packing accuracy for the guide trees.
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    /// Respect parameter of the guided solver.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Sampling trials per recursion are ceil(factor * ln n).
    #[arg(long, default_value_t = 3.0)]
    trials_factor: f64,
}

impl FastArgs {
    fn config(&self, validate: bool) -> ghcut::FastConfig {
        let mut cfg = ghcut::FastConfig { seed: self.seed, validate, ..Default::default() };
        cfg.ssmc.packing_epsilon = self.epsilon;
        cfg.ssmc.k = self.k;
        cfg.ssmc.trials_factor = self.trials_factor;
        cfg
    }
}

#[derive(Args)]
struct GhtreeArgs {
    /// Graph file (DIMACS-style or plain edge list).
    input: PathBuf,
    #[arg(long, value_enum, default_value = "fast")]
    algo: Algo,
    /// Check every terminal pair against max-flow and exit 2 on a mismatch.
    #[arg(long)]
    validate: bool,
    /// Write the tree as JSON instead of the text format.
    #[arg(long)]
    json: bool,
    /// Output file (stdout when absent).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Terminal file (whitespace-separated 0-based ids) or `all`.
    #[arg(long, default_value = "all")]
    terminals: String,
    #[command(flatten)]
    fast: FastArgs,
}

#[derive(Args)]
struct QueryArgs {
    /// Tree file (text or JSON).
    tree: PathBuf,
    /// Vertex pairs as `a,b` (0-based).
    pairs: Vec<String>,
    /// Print the value for every terminal pair.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "32,64")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "sparse")]
    densities: Vec<Density>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "classic,gusfield,fast")]
    algos: Vec<Algo>,
    /// Largest edge weight.
    #[arg(long, default_value_t = 20)]
    max_w: u64,
    /// Validate every tree (validation time is not included).
    #[arg(long)]
    validate: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    fast: FastArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Density {
    Sparse,
    Dense,
}

#[derive(Args)]
struct PackArgs {
    input: PathBuf,
    #[arg(long, default_value = "all")]
    terminals: String,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    json: bool,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::ValidationFailed { .. }) { 2 } else { 1 };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(1, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("ghcut: {e}");
            return ExitCode::from(1);
        }
    }
    let res = match &cli.cmd {
        Cmd::Ghtree(a) => cmd_ghtree(a),
        Cmd::Query(a) => cmd_query(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Pack(a) => cmd_pack(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("ghcut: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Fail> {
    io::read_graph(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_terminals(arg: &str, g: &Graph) -> Result<Vec<VertexId>, Fail> {
    if arg == "all" {
        return Ok((0..g.n()).collect());
    }
    let text = std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))?;
    let mut u = io::parse_vertex_list(&text).map_err(|e| usage(format!("{arg}: {e}")))?;
    for &v in &u {
        g.check_vertex(v)?;
    }
    u.sort_unstable();
    u.dedup();
    Ok(u)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build(g: &Graph, u: &[VertexId], algo: Algo, fast: &FastArgs, validate: bool) -> Result<(GhTree, FastStats), Fail> {
    let full = u.len() == g.n();
    Ok(match algo {
        Algo::Fast => ghtree_fast_stats(g, u, &fast.config(validate))?,
        _ if !full => return Err(usage(format!("--algo {} needs --terminals all", algo.name()))),
        Algo::Classic | Algo::Gusfield => {
            let (t, flow) = measured(|| match algo {
                Algo::Classic => ghcut::gomory_hu_classic(g),
                _ => ghcut::gusfield(g),
            });
            (t?, FastStats { flow, ..Default::default() })
        }
    })
}

fn cmd_ghtree(a: &GhtreeArgs) -> Result<(), Fail> {
    let g = read_graph(&a.input)?;
    let u = read_terminals(&a.terminals, &g)?;
    let (tree, stats) = build(&g, &u, a.algo, &a.fast, a.validate)?;
    if a.validate {
        if let Err(v) = verify::validate_ghtree(&g, &tree) {
            return Err(Fail(2, format!("validation failed: {v}")));
        }
        eprintln!(
            "validated {} terminal pairs ({} max-flow calls, {} retries)",
            u.len() * (u.len() - 1) / 2,
            stats.flow.calls,
            stats.retries
        );
    }
    let text = if a.json {
        let mut v = io::tree_to_json(&tree);
        v["algo"] = json!(a.algo.name());
        serde_json::to_string_pretty(&v).unwrap() + "\n"
    } else {
        io::write_tree(&tree)
    };
    emit(a.out.as_deref(), &text)
}

fn parse_pair(s: &str) -> Result<(VertexId, VertexId), Fail> {
    let bad = || usage(format!("bad pair `{s}`; expected a,b"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a == b {
        return Err(usage(format!("pair `{s}` names the same vertex twice")));
    }
    Ok((a, b))
}

fn cmd_query(a: &QueryArgs) -> Result<(), Fail> {
    let tree = io::read_tree(&a.tree).map_err(|e| usage(format!("{}: {e}", a.tree.display())))?;
    if a.all == !a.pairs.is_empty() {
        return Err(usage("give either vertex pairs or --all"));
    }
    if a.all {
        let m = tree.all_pairs();
        let u = tree.terminals();
        let rows: Vec<Vec<Option<u64>>> =
            u.iter().map(|&x| u.iter().map(|&y| (m[x][y] != NO_PAIR).then_some(m[x][y])).collect()).collect();
        if a.json {
            let v = json!({"schema": 1, "terminals": u, "matrix": rows});
            println!("{}", serde_json::to_string(&v).unwrap());
        } else {
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|c| c.map_or("-".into(), |x| x.to_string())).collect();
                println!("{}", cells.join(" "));
            }
        }
        return Ok(());
    }
    let mut answers = Vec::new();
    for p in &a.pairs {
        let (x, y) = parse_pair(p)?;
        for v in [x, y] {
            if v >= tree.n() || tree.terminals().binary_search(&v).is_err() {
                return Err(usage(format!("unknown vertex {v}")));
            }
        }
        answers.push((x, y, tree.query(x, y)?.0));
    }
    if a.json {
        let rows: Vec<Value> = answers.iter().map(|&(x, y, w)| json!({"a": x, "b": y, "lambda": w})).collect();
        println!("{}", serde_json::to_string(&json!({"schema": 1, "pairs": rows})).unwrap());
    } else {
        for (x, y, w) in answers {
            println!("{x} {y} {w}");
        }
    }
    Ok(())
}

fn counters_json(c: &FlowCounters) -> Value {
    json!({"flow_calls": c.calls, "flow_vertices": c.vertices, "flow_edges": c.edges})
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Fail> {
    let mut rows = Vec::new();
    for &n in &a.sizes {
        for &density in &a.densities {
            for &seed in &a.seeds {
                let (g, dname) = match density {
                    Density::Sparse => (gen::sparse(n, a.max_w, seed), "sparse"),
                    Density::Dense => (gen::dense(n, a.max_w, seed), "dense"),
                };
                let u: Vec<VertexId> = (0..n).collect();
                for &algo in &a.algos {
                    let start = Instant::now();
                    let (tree, stats) = build(&g, &u, algo, &a.fast, a.validate)?;
                    let secs = start.elapsed().as_secs_f64();
                    let mut row = json!({
                        "n": n,
                        "m": g.m(),
                        "density": dname,
                        "seed": seed,
                        "algo": algo.name(),
                        "seconds": secs,
                        "depth": stats.depth,
                        "retries": stats.retries,
                        "steps": stats.steps,
                        "mean_d_fraction": if stats.steps > 0 { stats.d_fraction_sum / stats.steps as f64 } else { 0.0 },
                    });
                    for (k, v) in counters_json(&stats.flow).as_object().unwrap() {
                        row[k] = v.clone();
                    }
                    if a.validate {
                        row["valid"] = json!(verify::validate_ghtree(&g, &tree).is_ok());
                    }
                    eprintln!("{dname} n={n} seed={seed} {}: {secs:.3}s", algo.name());
                    rows.push(row);
                }
            }
        }
    }
    let report = json!({"schema": 1, "rows": rows});
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&report).unwrap() + "\n"))
}

fn cmd_pack(a: &PackArgs) -> Result<(), Fail> {
    let g = read_graph(&a.input)?;
    let u = read_terminals(&a.terminals, &g)?;
    let p = packing::mwu_pack(&g, &u, a.epsilon)?;
    let lambda = oracles::steiner_mincut(&g, &u)?;
    let total = p.total_value();
    let ratio = total / lambda as f64;
    let feasible = p.is_feasible(&g);
    if a.json {
        let v = json!({
            "schema": 1,
            "terminals": u.len(),
            "epsilon": a.epsilon,
            "total_value": total,
            "lambda": lambda,
            "ratio": ratio,
            "feasible": feasible,
            "subgraphs": p.entries.len(),
            "iterations": p.iterations,
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        println!("terminals    {}", u.len());
        println!("total_value  {total:.6}");
        println!("lambda(U)    {lambda}");
        println!("ratio        {ratio:.6}");
        println!("feasible     {feasible}");
        println!("subgraphs    {} from {} iterations", p.entries.len(), p.iterations);
    }
    if !feasible {
        return Err(Fail(2, "packing overloads an edge".into()));
    }
    Ok(())
}
