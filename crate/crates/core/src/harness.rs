//! Running solvers by name, ensembles over generated or loaded graphs, and
//! the summary metrics written next to the per-instance CSV.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::CliqueCover;
use crate::fpt::{self, Decision, SearchConfig, SearchStats};
use crate::graph::{gnp_generate, read_edge_list, DegeneracyView, Graph, GraphError};
use crate::greedy::{self, nontrivial_count, CliqueSelectPolicy, EdgeOrderPolicy};
use crate::oracle;
use crate::stats::RunStats;

/// Stack size for threads that run the recursive search solvers.
pub const SEARCH_STACK_BYTES: usize = 512 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    Basic,
    Ccsg,
    Ccsd,
    Cfpt,
    Mfpt,
    Oracle,
    /// Assignment-minimum search.
    Am,
}

impl Solver {
    pub const ALL: [Solver; 7] = [
        Solver::Basic,
        Solver::Ccsg,
        Solver::Ccsd,
        Solver::Cfpt,
        Solver::Mfpt,
        Solver::Oracle,
        Solver::Am,
    ];
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Basic => "basic",
            Solver::Ccsg => "ccsg",
            Solver::Ccsd => "ccsd",
            Solver::Cfpt => "cfpt",
            Solver::Mfpt => "mfpt",
            Solver::Oracle => "oracle",
            Solver::Am => "am",
        })
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Solver::ALL
            .into_iter()
            .find(|a| a.to_string() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected one of basic, ccsg, ccsd, cfpt, mfpt, oracle, am)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Decision run with a fixed `k` answered no.
    NoCover,
    Timeout,
    /// Input exceeds what the solver accepts.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::NoCover => "none",
            Status::Timeout => "timeout",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub order: EdgeOrderPolicy,
    pub select: CliqueSelectPolicy,
    /// Decide a fixed budget instead of searching for the minimum.
    pub k: Option<usize>,
    pub time_limit: Duration,
    pub verify: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            order: EdgeOrderPolicy::default(),
            select: CliqueSelectPolicy::default(),
            k: None,
            time_limit: Duration::from_secs(60),
            verify: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: Status,
    pub cover: Option<CliqueCover>,
    pub stats: RunStats,
}

fn search_fields(stats: &mut RunStats, search: &SearchStats) {
    stats.nodes = Some(search.nodes);
    stats.max_depth = Some(search.max_depth);
    stats.max_branches = Some(search.max_branches);
    stats.branch_histogram = search.histogram_summary();
    stats.k = search.k;
}

/// Runs one solver on `g`. A run whose wall time reaches the limit is a
/// timeout even if it finished.
pub fn run_solver(name: &str, g: &Graph, solver: Solver, opts: &RunOptions) -> RunOutcome {
    let started = Instant::now();
    let dv = DegeneracyView::new(g);
    let cfg = SearchConfig {
        verify: opts.verify,
        ..Default::default()
    }
    .with_time_limit(opts.time_limit);
    let mut stats = RunStats::default();
    let (status, cover) = match solver {
        Solver::Basic => {
            let (c, s) = greedy::basic_greedy(g, opts.order, opts.select);
            stats = s;
            (Status::Ok, Some(c))
        }
        Solver::Ccsg => {
            let (c, s) = greedy::improved_greedy(g, opts.order, opts.select);
            stats = s;
            (Status::Ok, Some(c))
        }
        Solver::Ccsd => {
            let (c, s) = greedy::degeneracy_greedy_with(g, &dv, opts.select, false, |_| {});
            stats = s;
            (Status::Ok, Some(c))
        }
        Solver::Cfpt | Solver::Mfpt => {
            let algo = if solver == Solver::Cfpt {
                fpt::Algorithm::Cfpt
            } else {
                fpt::Algorithm::Mfpt
            };
            let (decision, search) = match opts.k {
                Some(k) => fpt::decide(algo, g, &dv, k, &cfg),
                None => match fpt::minimum_cover_with(g, &dv, algo, &cfg) {
                    Ok((c, s)) => (Decision::Cover(c), s),
                    Err(_) => (Decision::Timeout, SearchStats::default()),
                },
            };
            search_fields(&mut stats, &search);
            if algo == fpt::Algorithm::Cfpt {
                stats.ccs_max = Some(search.peak_candidate_mass);
            }
            match decision {
                Decision::Cover(c) => (Status::Ok, Some(c)),
                Decision::No => (Status::NoCover, None),
                Decision::Timeout => (Status::Timeout, None),
            }
        }
        Solver::Am => match fpt::assignment_minimum_with(g, &dv, &cfg, true) {
            Ok((c, search)) => {
                search_fields(&mut stats, &search);
                (Status::Ok, Some(c))
            }
            Err(_) => (Status::Timeout, None),
        },
        Solver::Oracle => match oracle::exact_minimum_size(g, oracle::SIZE_LIMIT) {
            Ok(r) => {
                let c = CliqueCover::from_cliques(g, r.witness).expect("oracle witness is a cover");
                (Status::Ok, Some(c))
            }
            Err(_) => (Status::Skipped, None),
        },
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let status = if status != Status::Skipped && started.elapsed() >= opts.time_limit {
        Status::Timeout
    } else {
        status
    };
    let cover = cover.filter(|_| status == Status::Ok);
    stats.graph = name.to_string();
    stats.n = g.vertex_count();
    stats.m = g.edge_count();
    stats.d = Some(dv.degeneracy());
    stats.delta = g.max_degree();
    stats.algorithm = solver.to_string();
    if stats.policy.is_empty() && matches!(solver, Solver::Basic | Solver::Ccsg | Solver::Ccsd) {
        stats.policy = format!("{}/{}", opts.order, opts.select);
    }
    stats.status = status.to_string();
    stats.cover_size = cover.as_ref().map(|c| c.len());
    stats.cover_size_nontrivial = cover.as_ref().map(|c| nontrivial_count(g, c.cliques()));
    stats.weight = cover.as_ref().map(|c| c.weight());
    stats.wall_ms = wall_ms;
    RunOutcome {
        status,
        cover,
        stats,
    }
}

/// Runs `f` on a thread with a stack large enough for deep search trees.
pub fn with_search_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(SEARCH_STACK_BYTES)
            .spawn_scoped(s, f)
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}

#[derive(Debug, Clone)]
pub enum Instances {
    /// `count` graphs `G(n, p)` seeded `base_seed, base_seed + 1, ...`.
    Gnp {
        n: usize,
        p: f64,
        count: usize,
        base_seed: u64,
    },
    Files(Vec<PathBuf>),
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub instances: Instances,
    pub roster: Vec<Solver>,
    pub options: RunOptions,
    /// Ratios are taken against this solver; otherwise between every pair
    /// of the roster.
    pub baseline: Option<Solver>,
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn gnp(n: usize, p: f64, count: usize, base_seed: u64, roster: Vec<Solver>) -> Self {
        ExperimentSpec {
            instances: Instances::Gnp {
                n,
                p,
                count,
                base_seed,
            },
            roster,
            options: RunOptions::default(),
            baseline: None,
            threads: None,
        }
    }

    /// Named graphs of the ensemble, in run order.
    pub fn load(&self) -> Result<Vec<(String, Graph)>, GraphError> {
        match &self.instances {
            Instances::Gnp {
                n,
                p,
                count,
                base_seed,
            } => (0..*count as u64)
                .map(|i| {
                    let seed = base_seed + i;
                    gnp_generate(*n, *p, seed).map(|g| (format!("gnp_{n}_{p}_{seed}"), g))
                })
                .collect(),
            Instances::Files(paths) => paths
                .iter()
                .map(|p| read_edge_list(p).map(|g| (p.display().to_string(), g)))
                .collect(),
        }
    }
}

/// Aggregate over an ensemble. Rows with an empty `versus` describe one
/// solver; the rest compare `algorithm` against `versus` on the instances
/// both completed.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub versus: String,
    pub instances: usize,
    pub completed: usize,
    pub completion_rate: f64,
    pub mean_wall_ms: Option<f64>,
    pub mean_nodes: Option<f64>,
    pub mean_size: Option<f64>,
    pub mean_size_nontrivial: Option<f64>,
    pub common: Option<usize>,
    pub geomean_runtime_ratio: Option<f64>,
    /// Over cover sizes without trivial cliques.
    pub geomean_size_ratio: Option<f64>,
    /// Mean of `(1 - size / versus_size) * 100`, trivial cliques excluded.
    pub mean_relative_reduction: Option<f64>,
    /// Fraction of common instances where both sizes are equal.
    pub size_agreement: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct EnsembleReport {
    pub rows: Vec<RunStats>,
    pub summary: Vec<SummaryRow>,
}

pub fn run_ensemble(spec: &ExperimentSpec) -> Result<EnsembleReport, GraphError> {
    let graphs = spec.load()?;
    let mut pool = rayon::ThreadPoolBuilder::new().stack_size(SEARCH_STACK_BYTES);
    if let Some(t) = spec.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().expect("thread pool");
    let per_instance: Vec<Vec<RunStats>> = pool.install(|| {
        graphs
            .par_iter()
            .map(|(name, g)| {
                spec.roster
                    .iter()
                    .map(|&s| run_solver(name, g, s, &spec.options).stats)
                    .collect()
            })
            .collect()
    });
    let summary = summarize(&per_instance, &spec.roster, spec.baseline);
    Ok(EnsembleReport {
        rows: per_instance.into_iter().flatten().collect(),
        summary,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn geomean(values: impl Iterator<Item = f64>) -> Option<f64> {
    mean(values.map(f64::ln)).map(f64::exp)
}

/// Ratio of nontrivial sizes; two empty covers count as equal.
fn size_ratio(a: usize, b: usize) -> Option<f64> {
    match (a, b) {
        (0, 0) => Some(1.0),
        (_, 0) => None,
        _ => Some(a as f64 / b as f64),
    }
}

pub fn summarize(
    per_instance: &[Vec<RunStats>],
    roster: &[Solver],
    baseline: Option<Solver>,
) -> Vec<SummaryRow> {
    let done = |r: &RunStats| r.status == "ok";
    let mut out = Vec::new();
    for (i, solver) in roster.iter().enumerate() {
        let runs: Vec<&RunStats> = per_instance.iter().map(|rows| &rows[i]).collect();
        let ok: Vec<&RunStats> = runs.iter().copied().filter(|r| done(r)).collect();
        out.push(SummaryRow {
            algorithm: solver.to_string(),
            instances: runs.len(),
            completed: ok.len(),
            completion_rate: if runs.is_empty() {
                0.0
            } else {
                ok.len() as f64 / runs.len() as f64 * 100.0
            },
            mean_wall_ms: mean(ok.iter().map(|r| r.wall_ms)),
            mean_nodes: mean(ok.iter().filter_map(|r| r.nodes).map(|v| v as f64)),
            mean_size: mean(ok.iter().filter_map(|r| r.cover_size).map(|v| v as f64)),
            mean_size_nontrivial: mean(
                ok.iter()
                    .filter_map(|r| r.cover_size_nontrivial)
                    .map(|v| v as f64),
            ),
            ..Default::default()
        });
    }
    let pairs: Vec<(usize, usize)> =
        match baseline.and_then(|b| roster.iter().position(|&s| s == b)) {
            Some(b) => (0..roster.len())
                .filter(|&a| a != b)
                .map(|a| (a, b))
                .collect(),
            None => (0..roster.len())
                .flat_map(|a| (a + 1..roster.len()).map(move |b| (a, b)))
                .collect(),
        };
    for (a, b) in pairs {
        let both: Vec<(&RunStats, &RunStats)> = per_instance
            .iter()
            .map(|rows| (&rows[a], &rows[b]))
            .filter(|(x, y)| done(x) && done(y))
            .collect();
        let sizes = || {
            both.iter()
                .filter_map(|(x, y)| Some((x.cover_size_nontrivial?, y.cover_size_nontrivial?)))
        };
        out.push(SummaryRow {
            algorithm: roster[a].to_string(),
            versus: roster[b].to_string(),
            instances: per_instance.len(),
            completed: both.len(),
            completion_rate: if per_instance.is_empty() {
                0.0
            } else {
                both.len() as f64 / per_instance.len() as f64 * 100.0
            },
            common: Some(both.len()),
            geomean_runtime_ratio: geomean(
                both.iter()
                    .map(|(x, y)| x.wall_ms.max(1e-3) / y.wall_ms.max(1e-3)),
            ),
            geomean_size_ratio: geomean(sizes().filter_map(|(x, y)| size_ratio(x, y))),
            mean_relative_reduction: mean(
                sizes()
                    .filter(|&(_, y)| y > 0)
                    .map(|(x, y)| (1.0 - x as f64 / y as f64) * 100.0),
            ),
            size_agreement: mean(
                both.iter()
                    .filter_map(|(x, y)| Some(f64::from(u8::from(x.cover_size? == y.cover_size?)))),
            ),
            ..Default::default()
        });
    }
    out
}

fn write_csv<T: Serialize>(out: impl Write, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows(out: impl Write, rows: &[RunStats]) -> csv::Result<()> {
    if rows.is_empty() {
        let mut out = out;
        writeln!(out, "{}", RunStats::csv_header())?;
        return Ok(());
    }
    write_csv(out, rows)
}

pub fn write_summary(out: impl Write, rows: &[SummaryRow]) -> csv::Result<()> {
    write_csv(out, rows)
}

/// `<stem>_summary.<ext>` next to `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_summary.{}", ext.to_string_lossy()),
        None => format!("{stem}_summary"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::g6;

    #[test]
    fn solver_names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.to_string().parse::<Solver>(), Ok(s));
        }
        assert!("gfpt".parse::<Solver>().is_err());
    }

    #[test]
    fn six_vertex_by_name() {
        let g = g6();
        let opts = RunOptions::default();
        for (solver, size) in [(Solver::Cfpt, 3), (Solver::Mfpt, 3), (Solver::Oracle, 3)] {
            let out = run_solver("g6", &g, solver, &opts);
            assert_eq!(out.status, Status::Ok);
            assert_eq!(out.stats.cover_size, Some(size));
            assert_eq!(out.stats.d, Some(3));
        }
        let out = run_solver("g6", &g, Solver::Ccsd, &opts);
        assert!(out.stats.cover_size.unwrap() <= 4);
        assert_eq!(
            run_solver("g6", &g, Solver::Am, &opts).stats.weight,
            Some(10)
        );
    }

    #[test]
    fn fixed_budget() {
        let opts = RunOptions {
            k: Some(2),
            ..Default::default()
        };
        let out = run_solver("g6", &g6(), Solver::Mfpt, &opts);
        assert_eq!(out.status, Status::NoCover);
        assert!(out.cover.is_none());
    }

    #[test]
    fn zero_time_limit_times_out_everything() {
        let mut spec =
            ExperimentSpec::gnp(8, 0.4, 4, 1, vec![Solver::Ccsg, Solver::Cfpt, Solver::Mfpt]);
        spec.options.time_limit = Duration::ZERO;
        let report = run_ensemble(&spec).unwrap();
        assert!(report.rows.iter().all(|r| r.status == "timeout"));
        assert!(report.summary.iter().all(|s| s.completion_rate == 0.0));
    }

    #[test]
    fn exact_solvers_agree() {
        let spec = ExperimentSpec::gnp(
            10,
            0.4,
            12,
            7,
            vec![Solver::Cfpt, Solver::Mfpt, Solver::Oracle],
        );
        let report = run_ensemble(&spec).unwrap();
        assert_eq!(report.rows.len(), 36);
        let pairs: Vec<_> = report
            .summary
            .iter()
            .filter(|s| !s.versus.is_empty())
            .collect();
        assert_eq!(pairs.len(), 3);
        assert!(pairs
            .iter()
            .all(|s| s.size_agreement == Some(1.0) && s.geomean_size_ratio == Some(1.0)));
    }

    #[test]
    fn reproducible_apart_from_timing() {
        let spec = ExperimentSpec::gnp(12, 0.3, 6, 3, vec![Solver::Ccsg, Solver::Ccsd]);
        let strip = |mut rows: Vec<RunStats>| {
            rows.iter_mut().for_each(|r| r.wall_ms = 0.0);
            rows
        };
        let a = strip(run_ensemble(&spec).unwrap().rows);
        let b = strip(run_ensemble(&spec).unwrap().rows);
        assert_eq!(a, b);
    }

    #[test]
    fn summary_path_naming() {
        assert_eq!(
            summary_path(Path::new("out/runs.csv")),
            PathBuf::from("out/runs_summary.csv")
        );
        assert_eq!(
            summary_path(Path::new("runs")),
            PathBuf::from("runs_summary")
        );
    }
}
