use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use permod::formats::{parse_graph, parse_matrix, parse_symmetric};
use permod::hafnian::{count_matchings_mod2k, hf_mod2k};
use permod::permanent::{perm_interpolate, perm_zx_mod2k, DEFAULT_INTERPOLATION_BUDGET};
use permod::sdc::{
    reconstruct_cycles, reconstruct_marked_vertices, reconstruct_sdp2, sdce_from_marked_vertices,
    shortest_cycle_through_edges, shortest_two_disjoint_cycles, solve_sdp2, trial_seed, trial_value,
    MarkedInstance, SdcError, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "permod", version, about = "Permanents and hafnians mod 2^k, shortest disjoint cycles and paths")]
struct Cli {
    /// Worker threads, or "auto".
    #[arg(long, global = true, default_value = "auto")]
    threads: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Permanent of a matrix over Z[x], mod 2^k.
    Perm {
        file: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=63))]
        k: u32,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Maximum number of evaluations for the interpolation method.
        #[arg(long, default_value_t = DEFAULT_INTERPOLATION_BUDGET)]
        budget: u64,
    },
    /// Shortest pair of vertex-disjoint paths s1-t1, s2-t2.
    Sdp2 {
        file: PathBuf,
        /// s1,t1,s2,t2
        #[arg(long, value_delimiter = ',', required = true)]
        terminals: Vec<usize>,
        #[command(flatten)]
        rand: RandArgs,
    },
    /// Shortest l vertex-disjoint cycles through marked edges or vertices.
    Sdc {
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
        l: u32,
        /// Marked edge indices (input order); overrides the file.
        #[arg(long = "marked-edge", value_delimiter = ',')]
        marked_edges: Vec<usize>,
        /// Marked vertices; overrides the file.
        #[arg(long = "marked-vertex", value_delimiter = ',')]
        marked_vertices: Vec<usize>,
        #[command(flatten)]
        rand: RandArgs,
    },
    /// Hafnian of a symmetric integer matrix, mod 2^k.
    Hafnian {
        file: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=63))]
        k: u32,
    },
    /// Number of perfect matchings of a graph, mod 2^k.
    Matchings {
        file: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=63))]
        k: u32,
    },
    /// Compare the fast paths with brute-force references.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct RandArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Also print the edges of an optimal solution.
    #[arg(long)]
    reconstruct: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Interpolate,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn with_file<T, E: std::fmt::Display>(path: &Path, r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn weight(w: Option<u64>) -> String {
    w.map_or_else(|| "none".to_string(), |w| w.to_string())
}

fn print_edges(g: &WeightedGraph, edges: &[usize]) {
    let list: Vec<String> = edges
        .iter()
        .map(|&i| {
            let e = g.edge(i);
            format!("{}-{}", e.u, e.v)
        })
        .collect();
    println!("edges: {}", list.join(" "));
}

fn report_reconstruction(g: &WeightedGraph, found: Option<Vec<usize>>) {
    match found {
        Some(edges) => print_edges(g, &edges),
        None => println!("edges: not recovered (optimum not isolated by any trial)"),
    }
}

/// First trial seed whose weighting reaches `target` and reconstructs.
fn first_reconstruction(trials: u32, seed: u64, mut attempt: impl FnMut(u64) -> Result<Option<Vec<usize>>, SdcError>) -> Result<Option<Vec<usize>>> {
    for t in 0..trials as u64 {
        if let Some(edges) = attempt(trial_seed(seed, t))? {
            return Ok(Some(edges));
        }
    }
    Ok(None)
}

fn non_unique_as_none(r: Result<Vec<usize>, SdcError>) -> Result<Option<Vec<usize>>, SdcError> {
    match r {
        Ok(e) => Ok(Some(e)),
        Err(SdcError::NonUnique) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Perm { file, k, method, budget } => {
            let a = with_file(&file, parse_matrix(&read(&file)?))?;
            let p = match method {
                Method::Direct => perm_zx_mod2k(&a, k)?,
                Method::Interpolate => perm_interpolate(&a, k, budget)?,
            };
            println!("{p}");
        }
        Command::Sdp2 { file, terminals, rand } => {
            let gf = with_file(&file, parse_graph(&read(&file)?))?;
            let [s1, t1, s2, t2] = terminals[..] else {
                bail!("--terminals takes s1,t1,s2,t2");
            };
            let w = solve_sdp2(&gf.graph, s1, t1, s2, t2, rand.seed, rand.trials)?;
            println!("{}", weight(w));
            if let (Some(w), true) = (w, rand.reconstruct) {
                let found = first_reconstruction(rand.trials, rand.seed, |s| {
                    non_unique_as_none(reconstruct_sdp2(&gf.graph, [s1, t1, s2, t2], w, s))
                })?;
                report_reconstruction(&gf.graph, found);
            }
        }
        Command::Sdc {
            file,
            l,
            marked_edges,
            marked_vertices,
            rand,
        } => {
            let gf = with_file(&file, parse_graph(&read(&file)?))?;
            let l = l as usize;
            let (edges, vertices) = if marked_edges.is_empty() && marked_vertices.is_empty() {
                (gf.marked_edges, gf.marked_vertices)
            } else {
                (marked_edges, marked_vertices)
            };
            match (edges.is_empty(), vertices.is_empty()) {
                (false, true) => {
                    let inst = MarkedInstance::new(gf.graph.clone(), edges)?;
                    let w = if l == 1 {
                        shortest_cycle_through_edges(&inst, rand.seed, rand.trials)?
                    } else {
                        shortest_two_disjoint_cycles(&inst, rand.seed, rand.trials)?
                    };
                    println!("{}", weight(w));
                    if let (Some(w), true) = (w, rand.reconstruct) {
                        let found = first_reconstruction(rand.trials, rand.seed, |s| {
                            if trial_value(&inst, l, s)? != Some(w) {
                                return Ok(None);
                            }
                            non_unique_as_none(reconstruct_cycles(&inst, l, w, s))
                        })?;
                        report_reconstruction(&gf.graph, found);
                    }
                }
                (true, false) => {
                    let w = sdce_from_marked_vertices(&gf.graph, &vertices, l, rand.seed, rand.trials)?;
                    println!("{}", weight(w));
                    if let (Some(w), true) = (w, rand.reconstruct) {
                        let found = non_unique_as_none(reconstruct_marked_vertices(
                            &gf.graph,
                            &vertices,
                            l,
                            w,
                            rand.seed,
                            rand.trials,
                        ))?;
                        report_reconstruction(&gf.graph, found);
                    }
                }
                (true, true) => bail!("no marked edges or vertices given"),
                (false, false) => bail!("give marked edges or marked vertices, not both"),
            }
        }
        Command::Hafnian { file, k } => {
            let a = with_file(&file, parse_symmetric(&read(&file)?))?;
            println!("{}", hf_mod2k(&a, k)?);
        }
        Command::Matchings { file, k } => {
            let gf = with_file(&file, parse_graph(&read(&file)?))?;
            println!("{}", count_matchings_mod2k(&gf.graph, k)?);
        }
        Command::Selftest { seed } => {
            let rows = permod::selftest::run(seed);
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                println!(
                    "{:<width$}  {:>3} cases  {}  {:.2?}",
                    r.name,
                    r.cases,
                    if r.passed { "pass" } else { "FAIL" },
                    r.elapsed
                );
            }
            if rows.iter().any(|r| !r.passed) {
                bail!("selftest failed");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads != "auto" {
        let n: usize = match cli.threads.parse() {
            Ok(n) if n > 0 => n,
            _ => {
                eprintln!("error: --threads takes a positive integer or \"auto\"");
                return ExitCode::from(2);
            }
        };
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool set once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
