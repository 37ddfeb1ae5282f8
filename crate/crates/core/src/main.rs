use std::fs::{self, File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use ecc::cover::{format_cover, is_cover, parse_cover};
use ecc::graph::{gnp_generate, read_edge_list, trivial_cliques, DegeneracyView, Graph};
use ecc::greedy::{CliqueSelectPolicy, EdgeOrderPolicy};
use ecc::harness::{
    run_ensemble, run_solver, summary_path, with_search_stack, write_rows, write_summary,
    ExperimentSpec, Instances, RunOptions, Solver, Status,
};
use ecc::mce::maximal_cliques;
use ecc::oracle;
use ecc::stats::RunStats;

const EXIT_NO_COVER: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "ecc",
    version,
    about = "Edge clique covers of undirected graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PolicyArgs {
    /// Greedy edge order: degree, degeneracy or input.
    #[arg(long, default_value = "degree")]
    order: EdgeOrderPolicy,
    /// Greedy clique choice: smallest, largest, earliest or random.
    #[arg(long, default_value = "largest")]
    select: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "time-limit-ms", default_value_t = 60_000)]
    time_limit_ms: u64,
    /// Check search invariants at every node.
    #[arg(long, hide = true)]
    verify: bool,
}

impl PolicyArgs {
    fn options(&self, k: Option<usize>) -> Result<RunOptions, String> {
        Ok(RunOptions {
            order: self.order,
            select: CliqueSelectPolicy::parse(&self.select, self.seed)?,
            k,
            time_limit: Duration::from_millis(self.time_limit_ms),
            verify: self.verify,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a clique cover of an edge-list file.
    Cover {
        graph: PathBuf,
        #[arg(long, default_value = "ccsg")]
        algo: Solver,
        /// Decide whether a cover with at most k cliques exists (cfpt, mfpt).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Cover file to write; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV file the run statistics are appended to; stderr when absent.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Run a roster of solvers over an ensemble and write CSV reports.
    Ensemble {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        #[arg(long, default_value_t = 32)]
        count: usize,
        /// Edge-list files to use instead of generated graphs.
        #[arg(long, num_args = 1..)]
        files: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "ccsg,ccsd,cfpt,mfpt")]
        roster: Vec<Solver>,
        /// Compare every solver against this one instead of all pairs.
        #[arg(long)]
        baseline: Option<Solver>,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Per-instance CSV; the summary goes to `<stem>_summary.<ext>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a G(n, p) edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a cover file covers a graph.
    Verify { graph: PathBuf, cover: PathBuf },
    /// Print n, m, degeneracy, max degree and trivial clique count.
    Stats { graphs: Vec<PathBuf> },
    /// Print every maximal clique.
    #[command(hide = true)]
    Cliques { graph: PathBuf },
    /// Exact minimum size and, for small graphs, weight.
    #[command(hide = true)]
    Oracle { graph: PathBuf },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load(path: &Path) -> Result<Graph, ExitCode> {
    read_edge_list(path).map_err(|e| fail(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn append_stats(path: &Path, row: &RunStats) -> io::Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{}", RunStats::csv_header())?;
    }
    writeln!(f, "{}", row.to_csv_row())
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn cover(
    graph: &Path,
    algo: Solver,
    k: Option<usize>,
    policy: &PolicyArgs,
    out: Option<&Path>,
    stats: Option<&Path>,
) -> Result<ExitCode, ExitCode> {
    let g = load(graph)?;
    let opts = policy.options(k).map_err(|e| fail(EXIT_INVALID, e))?;
    let run = with_search_stack(|| run_solver(&graph_name(graph), &g, algo, &opts));
    match stats {
        Some(p) => append_stats(p, &run.stats).map_err(|e| fail(EXIT_INVALID, e))?,
        None => eprintln!("{}\n{}", RunStats::csv_header(), run.stats.to_csv_row()),
    }
    match (run.status, run.cover) {
        (Status::Ok, Some(c)) => {
            let mut w = output(out).map_err(|e| fail(EXIT_INVALID, e))?;
            w.write_all(format_cover(&g, c.cliques()).as_bytes())
                .map_err(|e| fail(EXIT_INVALID, e))?;
            Ok(ExitCode::SUCCESS)
        }
        (Status::NoCover, _) => Err(fail(
            EXIT_NO_COVER,
            format!("no cover with at most {} cliques", k.unwrap_or(0)),
        )),
        (Status::Timeout, _) => Err(fail(EXIT_TIMEOUT, "time limit reached")),
        _ => Err(fail(
            EXIT_INVALID,
            format!("{algo} does not accept this graph"),
        )),
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Cover {
            graph,
            algo,
            k,
            policy,
            out,
            stats,
        } => cover(&graph, algo, k, &policy, out.as_deref(), stats.as_deref()),
        Command::Ensemble {
            n,
            p,
            count,
            files,
            roster,
            baseline,
            threads,
            policy,
            out,
        } => {
            let instances = if files.is_empty() {
                Instances::Gnp {
                    n,
                    p,
                    count,
                    base_seed: policy.seed,
                }
            } else {
                Instances::Files(files)
            };
            let spec = ExperimentSpec {
                instances,
                roster,
                options: policy.options(None).map_err(|e| fail(EXIT_INVALID, e))?,
                baseline,
                threads,
            };
            let report = run_ensemble(&spec).map_err(|e| fail(EXIT_INVALID, e))?;
            let io_err = |e: csv::Error| fail(EXIT_INVALID, e);
            match out {
                Some(path) => {
                    let rows = File::create(&path).map_err(|e| fail(EXIT_INVALID, e))?;
                    write_rows(rows, &report.rows).map_err(io_err)?;
                    let summary =
                        File::create(summary_path(&path)).map_err(|e| fail(EXIT_INVALID, e))?;
                    write_summary(summary, &report.summary).map_err(io_err)?;
                }
                None => {
                    write_rows(io::stdout().lock(), &report.rows).map_err(io_err)?;
                    println!();
                    write_summary(io::stdout().lock(), &report.summary).map_err(io_err)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { n, p, seed, out } => {
            let g = gnp_generate(n, p, seed).map_err(|e| fail(EXIT_INVALID, e))?;
            let mut w = output(out.as_deref()).map_err(|e| fail(EXIT_INVALID, e))?;
            writeln!(w, "# G({n}, {p}) seed={seed}")
                .and_then(|_| w.write_all(g.to_edge_list().as_bytes()))
                .map_err(|e| fail(EXIT_INVALID, e))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { graph, cover } => {
            let g = load(&graph)?;
            let file = File::open(&cover)
                .map_err(|e| fail(EXIT_INVALID, format!("{}: {e}", cover.display())))?;
            let cliques =
                parse_cover(&g, BufReader::new(file)).map_err(|e| fail(EXIT_INVALID, e))?;
            match is_cover(&g, &cliques) {
                Ok(true) => {
                    println!(
                        "ok cliques={} weight={}",
                        cliques.len(),
                        ecc::cover::cover_weight(&cliques)
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Ok(false) => Err(fail(EXIT_NO_COVER, "some edges are not covered")),
                Err(e) => Err(fail(EXIT_INVALID, e)),
            }
        }
        Command::Stats { graphs } => {
            println!("graph,n,m,d,delta,trivial");
            for path in graphs {
                let g = load(&path)?;
                let dv = DegeneracyView::new(&g);
                println!(
                    "{},{},{},{},{},{}",
                    graph_name(&path),
                    g.vertex_count(),
                    g.edge_count(),
                    dv.degeneracy(),
                    g.max_degree(),
                    trivial_cliques(&g).len()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cliques { graph } => {
            let g = load(&graph)?;
            let cliques = maximal_cliques(&g);
            print!("{}", format_cover(&g, &cliques));
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { graph } => {
            let g = load(&graph)?;
            let size = oracle::exact_minimum_size(&g, oracle::SIZE_LIMIT)
                .map_err(|e| fail(EXIT_INVALID, e))?;
            let weight = oracle::exact_minimum_weight(&g, oracle::WEIGHT_LIMIT)
                .ok()
                .and_then(|r| r.min_weight);
            let weight = weight.map_or_else(|| "-".to_string(), |w| w.to_string());
            println!(
                "min_size={} min_weight={weight}",
                size.min_size.unwrap_or(0)
            );
            print!("{}", format_cover(&g, &size.witness));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
