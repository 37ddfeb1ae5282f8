//! Search-tree solvers for the clique cover decision problem parameterized
//! by degeneracy `d` and cover size `k`.
//!
//! * CFPT branches on the candidate cliques `S_x ∩ S_y` of an uncovered edge
//!   plus one new 2-clique. The edge `{x, y}` is taken with `y ∈ N_d(x)` and
//!   `x` as late as possible in the degeneracy ordering, so every clique
//!   stays inside `{x, ...}` and a node has at most `⌊d²/4⌋ + 1` branches.
//! * MFPT branches on the maximal cliques through `{x, y}` inside
//!   `(N_d(x) ∩ N(y)) ∪ {x, y}`, with `x` as early as possible, so all edges
//!   of earlier vertices are already covered.
//!
//! Both mutate one shared state and undo every change on backtrack.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cover::{CandidateCliqueSets, Clique, CliqueCover};
use crate::graph::{trivial_cliques, DegeneracyView, Graph, Vertex};
use crate::mce::{maximal_cliques_containing_edge, InducedSubgraphSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Cfpt,
    Mfpt,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Cfpt => "cfpt",
            Algorithm::Mfpt => "mfpt",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cfpt" => Ok(Algorithm::Cfpt),
            "mfpt" => Ok(Algorithm::Mfpt),
            _ => Err(format!("unknown search algorithm {s:?}")),
        }
    }
}

/// The search hit its wall-clock limit or was cancelled.
#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
#[error("search stopped before finishing")]
pub struct Timeout;

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Cover(CliqueCover),
    No,
    Timeout,
}

impl Decision {
    pub fn into_cover(self) -> Option<CliqueCover> {
        match self {
            Decision::Cover(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
    /// Emit trivial cliques up front and charge them against `k`.
    pub preprocess_trivial: bool,
    /// Check the per-node invariants and exact state restoration. Slow.
    pub verify: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            deadline: None,
            cancel: None,
            preprocess_trivial: true,
            verify: false,
        }
    }
}

impl SearchConfig {
    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    pub fn verified(mut self) -> Self {
        self.verify = true;
        self
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
            || self
                .cancel
                .as_ref()
                .is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

/// Search-tree instrumentation, accumulated over every decision run of a
/// driver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    /// Number of nodes per branching factor.
    pub branches: BTreeMap<usize, u64>,
    pub max_branches: usize,
    /// Peak Σ|S_x| (CFPT only).
    pub peak_candidate_mass: usize,
    /// Budget of the decision run that produced the result.
    pub k: Option<usize>,
    /// Number of decision runs.
    pub runs: usize,
}

impl SearchStats {
    fn record(&mut self, depth: usize, branches: usize) {
        self.max_depth = self.max_depth.max(depth);
        self.max_branches = self.max_branches.max(branches);
        *self.branches.entry(branches).or_default() += 1;
    }

    fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.max_branches = self.max_branches.max(other.max_branches);
        self.peak_candidate_mass = self.peak_candidate_mass.max(other.peak_candidate_mass);
        for (&b, &c) in &other.branches {
            *self.branches.entry(b).or_default() += c;
        }
        self.runs += other.runs;
    }

    /// `branches:count` pairs joined by `;`.
    pub fn histogram_summary(&self) -> String {
        self.branches
            .iter()
            .map(|(b, c)| format!("{b}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Branch bound per CFPT node: `⌊d²/4⌋ + 1`.
pub fn cfpt_branch_bound(d: usize) -> usize {
    d * d / 4 + 1
}

/// Branch bound per MFPT node: `⌈3^{d/3}⌉`.
pub fn mfpt_branch_bound(d: usize) -> usize {
    3f64.powf(d as f64 / 3.0).ceil() as usize
}

/// Cover seeded with the trivial cliques, which every cover must contain.
fn seeded_cover(g: &Graph, dv: &DegeneracyView, preprocess: bool) -> CliqueCover {
    let mut cover = CliqueCover::oriented(g, dv);
    if preprocess {
        for (u, v) in trivial_cliques(g) {
            cover.push_clique(g, Clique::new(vec![u, v]));
        }
    }
    cover
}

/// Uncovered later-edge of the vertex at `pos`, if any.
fn uncovered_later(g: &Graph, dv: &DegeneracyView, cover: &CliqueCover, x: Vertex) -> Vertex {
    *dv.later_neighbors(x)
        .iter()
        .find(|&&y| !cover.is_covered(g.edge_id(x, y).expect("edge")))
        .expect("owner count says an edge is uncovered")
}

/// Undo record of one existing-clique branch.
struct Prepared {
    clique: usize,
    moved: Vec<Vertex>,
    had_x: bool,
    had_y: bool,
}

struct AssignmentMinimum {
    best: Option<(usize, Vec<Clique>)>,
    prune: bool,
}

struct CandidateSearch<'a> {
    g: &'a Graph,
    dv: &'a DegeneracyView,
    cfg: &'a SearchConfig,
    cover: CliqueCover,
    sets: CandidateCliqueSets,
    trivial: usize,
    stats: SearchStats,
    am: Option<AssignmentMinimum>,
}

impl<'a> CandidateSearch<'a> {
    fn new(g: &'a Graph, dv: &'a DegeneracyView, cfg: &'a SearchConfig) -> Self {
        let cover = seeded_cover(g, dv, cfg.preprocess_trivial);
        // a trivial clique {u, v} has no common neighbor, so R = {u, v}
        let mut sets = CandidateCliqueSets::new(g.vertex_count());
        for (l, c) in cover.cliques().iter().enumerate() {
            for &v in c.vertices() {
                sets.insert(v, l);
            }
        }
        CandidateSearch {
            g,
            dv,
            cfg,
            trivial: cover.len(),
            cover,
            sets,
            stats: SearchStats::default(),
            am: None,
        }
    }

    fn select(&self, hint: usize) -> Option<(usize, Vertex, Vertex)> {
        let order = self.dv.order();
        let pos = (0..hint)
            .rev()
            .find(|&i| self.cover.uncovered_owned(order[i]) > 0)?;
        let x = order[pos];
        Some((pos, x, uncovered_later(self.g, self.dv, &self.cover, x)))
    }

    /// Removes `l` from the candidate sets of members of `R_l` that stop
    /// being candidates once `x` and `y` join `C_l`.
    fn prepare(&mut self, l: usize, x: Vertex, y: Vertex) -> Prepared {
        let g = self.g;
        let moved: Vec<Vertex> = self
            .sets
            .reverse(l)
            .iter()
            .copied()
            .filter(|&z| z != x && z != y && !(g.has_edge(x, z) && g.has_edge(y, z)))
            .collect();
        for &z in &moved {
            self.sets.remove(z, l);
        }
        let c = self.cover.clique(l);
        Prepared {
            clique: l,
            had_x: c.contains(x),
            had_y: c.contains(y),
            moved,
        }
    }

    fn restore(&mut self, p: Prepared, x: Vertex, y: Vertex) {
        for &z in &p.moved {
            self.sets.insert(z, p.clique);
        }
        if !p.had_x {
            self.cover.remove_vertex(self.g, p.clique, x);
        }
        if !p.had_y {
            self.cover.remove_vertex(self.g, p.clique, y);
        }
    }

    fn add_new_clique(&mut self, x: Vertex, y: Vertex) {
        let p = self.cover.push_clique(self.g, Clique::new(vec![x, y]));
        self.sets.insert(x, p);
        self.sets.insert(y, p);
        for z in self.g.common_neighbors(x, y) {
            self.sets.insert(z, p);
        }
    }

    fn remove_new_clique(&mut self) {
        let p = self.cover.len() - 1;
        for z in self.sets.reverse(p).to_vec() {
            self.sets.remove(z, p);
        }
        self.sets.truncate_cliques(p);
        self.cover.pop_clique(self.g);
    }

    fn node(&mut self, k: usize, depth: usize, hint: usize) -> Result<bool, Timeout> {
        self.stats.nodes += 1;
        if self.stats.nodes % 256 == 1 && self.cfg.expired() {
            return Err(Timeout);
        }
        self.stats.peak_candidate_mass = self.stats.peak_candidate_mass.max(self.sets.mass());
        if let Some(am) = &self.am {
            if am.prune
                && am
                    .best
                    .as_ref()
                    .is_some_and(|(w, _)| self.cover.weight() >= *w)
            {
                self.stats.record(depth, 0);
                return Ok(false);
            }
        }
        let Some((pos, x, y)) = self.select(hint) else {
            self.stats.record(depth, 0);
            return Ok(self.complete());
        };
        let candidates = self.sets.intersection(x, y);
        self.stats
            .record(depth, candidates.len() + usize::from(k > 0));
        if self.cfg.verify {
            self.check_node(pos, x, y);
        }
        let searching = self.am.is_none();
        for l in candidates {
            let snapshot = self
                .cfg
                .verify
                .then(|| (self.cover.clone(), self.sets.clone()));
            let prepared = self.prepare(l, x, y);
            self.cover.insert_vertex(self.g, l, x);
            self.cover.insert_vertex(self.g, l, y);
            if self.node(k, depth + 1, pos + 1)? && searching {
                return Ok(true);
            }
            self.restore(prepared, x, y);
            if let Some((cover, sets)) = snapshot {
                assert!(
                    cover == self.cover && sets == self.sets,
                    "restore diverged at depth {depth}"
                );
            }
        }
        if k > 0 {
            let snapshot = self
                .cfg
                .verify
                .then(|| (self.cover.clone(), self.sets.clone()));
            self.add_new_clique(x, y);
            if self.node(k - 1, depth + 1, pos + 1)? && searching {
                return Ok(true);
            }
            self.remove_new_clique();
            if let Some((cover, sets)) = snapshot {
                assert!(
                    cover == self.cover && sets == self.sets,
                    "new-clique undo diverged at depth {depth}"
                );
            }
        }
        Ok(false)
    }

    /// Called when every edge is covered. Returns whether the search stops.
    fn complete(&mut self) -> bool {
        match &mut self.am {
            None => true,
            Some(am) => {
                let w = self.cover.weight();
                if am.best.as_ref().is_none_or(|(b, _)| w < *b) {
                    am.best = Some((w, self.cover.cliques().to_vec()));
                }
                false
            }
        }
    }

    fn check_node(&self, pos: usize, x: Vertex, y: Vertex) {
        let (g, dv) = (self.g, self.dv);
        // same edge as a plain scan over all uncovered edges
        let naive = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| !self.cover.is_covered(e))
            .map(|(_, &(u, v))| if dv.precedes(u, v) { (u, v) } else { (v, u) })
            .max_by_key(|&(u, v)| (dv.position(u), std::cmp::Reverse(dv.position(v))))
            .expect("uncovered edge exists");
        assert_eq!(naive, (x, y), "edge selection");
        for c in &self.cover.cliques()[self.trivial..] {
            assert!(
                c.vertices().iter().all(|&v| dv.position(v) >= pos),
                "clique {c:?} reaches before position {pos}"
            );
        }
        assert!(self.sets.is_consistent());
        let scratch = CandidateCliqueSets::from_scratch(g, self.cover.cliques());
        for z in 0..g.vertex_count() {
            assert_eq!(
                self.sets.set(z),
                scratch.set(z),
                "S_{z} diverged from its definition"
            );
        }
    }
}

struct MaximalSearch<'a> {
    g: &'a Graph,
    dv: &'a DegeneracyView,
    cfg: &'a SearchConfig,
    cover: CliqueCover,
    stats: SearchStats,
}

impl MaximalSearch<'_> {
    fn select(&self, hint: usize) -> Option<(usize, Vertex, Vertex)> {
        let order = self.dv.order();
        let pos = (hint..order.len()).find(|&i| self.cover.uncovered_owned(order[i]) > 0)?;
        let x = order[pos];
        Some((pos, x, uncovered_later(self.g, self.dv, &self.cover, x)))
    }

    fn node(&mut self, k: usize, depth: usize, hint: usize) -> Result<bool, Timeout> {
        self.stats.nodes += 1;
        if self.stats.nodes % 256 == 1 && self.cfg.expired() {
            return Err(Timeout);
        }
        let Some((pos, x, y)) = self.select(hint) else {
            self.stats.record(depth, 0);
            return Ok(true);
        };
        if k == 0 {
            self.stats.record(depth, 0);
            return Ok(false);
        }
        if self.cfg.verify {
            let order = self.dv.order();
            for &u in &order[..pos] {
                assert!(
                    self.g
                        .neighbors(u)
                        .iter()
                        .all(|&w| self.cover.is_covered(self.g.edge_id(u, w).unwrap())),
                    "edge at earlier vertex {u} left uncovered"
                );
            }
        }
        let spec = InducedSubgraphSpec::later_common(self.g, self.dv, x, y);
        let cliques =
            maximal_cliques_containing_edge(self.g, &spec).expect("spec is built from the graph");
        self.stats.record(depth, cliques.len());
        for clique in cliques {
            self.cover.push_clique(self.g, clique);
            if self.node(k - 1, depth + 1, pos)? {
                return Ok(true);
            }
            self.cover.pop_clique(self.g);
        }
        Ok(false)
    }
}

/// Decides whether `g` has a cover with at most `k` cliques.
pub fn decide(
    algo: Algorithm,
    g: &Graph,
    dv: &DegeneracyView,
    k: usize,
    cfg: &SearchConfig,
) -> (Decision, SearchStats) {
    let mut stats = SearchStats {
        k: Some(k),
        runs: 1,
        ..Default::default()
    };
    if cfg.expired() {
        return (Decision::Timeout, stats);
    }
    let outcome = match algo {
        Algorithm::Cfpt => {
            let mut s = CandidateSearch::new(g, dv, cfg);
            let result = match k.checked_sub(s.trivial) {
                None => Ok(false),
                Some(budget) => s.node(budget, 0, dv.order().len()),
            };
            stats.merge(&s.stats);
            stats.runs = 1;
            result.map(|found| found.then_some(s.cover))
        }
        Algorithm::Mfpt => {
            let cover = seeded_cover(g, dv, cfg.preprocess_trivial);
            let mut s = MaximalSearch {
                g,
                dv,
                cfg,
                stats: SearchStats::default(),
                cover,
            };
            let result = match k.checked_sub(s.cover.len()) {
                None => Ok(false),
                Some(budget) => s.node(budget, 0, 0),
            };
            stats.merge(&s.stats);
            stats.runs = 1;
            result.map(|found| found.then_some(s.cover))
        }
    };
    let decision = match outcome {
        Ok(Some(cover)) => Decision::Cover(cover),
        Ok(None) => Decision::No,
        Err(Timeout) => Decision::Timeout,
    };
    (decision, stats)
}

/// CFPT decision with default configuration.
pub fn cfpt_decide(g: &Graph, dv: &DegeneracyView, k: usize) -> Option<CliqueCover> {
    decide(Algorithm::Cfpt, g, dv, k, &SearchConfig::default())
        .0
        .into_cover()
}

/// MFPT decision with default configuration.
pub fn mfpt_decide(g: &Graph, dv: &DegeneracyView, k: usize) -> Option<CliqueCover> {
    decide(Algorithm::Mfpt, g, dv, k, &SearchConfig::default())
        .0
        .into_cover()
}

/// Smallest `k` for which the decision succeeds, trying `k` upward from the
/// number of trivial cliques (at least one when `g` has edges).
pub fn minimum_cover_with(
    g: &Graph,
    dv: &DegeneracyView,
    algo: Algorithm,
    cfg: &SearchConfig,
) -> Result<(CliqueCover, SearchStats), Timeout> {
    let mut total = SearchStats::default();
    if cfg.expired() {
        return Err(Timeout);
    }
    if g.edge_count() == 0 {
        total.k = Some(0);
        return Ok((CliqueCover::oriented(g, dv), total));
    }
    let start = if cfg.preprocess_trivial {
        trivial_cliques(g).len().max(1)
    } else {
        1
    };
    for k in start..=g.edge_count() {
        let (decision, stats) = decide(algo, g, dv, k, cfg);
        total.merge(&stats);
        match decision {
            Decision::Cover(cover) => {
                debug_assert_eq!(cover.len(), k);
                total.k = Some(k);
                return Ok((cover, total));
            }
            Decision::No => {}
            Decision::Timeout => return Err(Timeout),
        }
    }
    unreachable!("one clique per edge always succeeds")
}

pub fn minimum_cover(g: &Graph, algo: Algorithm) -> (CliqueCover, SearchStats) {
    let dv = DegeneracyView::new(g);
    minimum_cover_with(g, &dv, algo, &SearchConfig::default()).expect("no deadline")
}

/// Runs CFPT and MFPT side by side and returns whichever finishes first,
/// after checking that its result covers `g`.
pub fn minimum_cover_race(
    g: &Graph,
    dv: &DegeneracyView,
    cfg: &SearchConfig,
) -> Result<(Algorithm, CliqueCover, SearchStats), Timeout> {
    let stop = Arc::new(AtomicBool::new(false));
    let run = |algo: Algorithm| {
        let mut own = cfg.clone();
        own.cancel = Some(stop.clone());
        let result = minimum_cover_with(g, dv, algo, &own);
        if result.as_ref().is_ok_and(|(c, _)| c.is_complete()) {
            stop.store(true, Ordering::Relaxed);
        }
        result.map(|(c, s)| (algo, c, s))
    };
    let (a, b) = std::thread::scope(|scope| {
        let a = scope.spawn(|| run(Algorithm::Cfpt));
        let b = scope.spawn(|| run(Algorithm::Mfpt));
        (
            a.join().expect("cfpt thread"),
            b.join().expect("mfpt thread"),
        )
    });
    a.or(b)
}

/// Cover minimizing Σ|C_l|: CFPT with budget `m` that explores every leaf
/// and keeps the lightest cover found first. With `prune`, subtrees whose
/// partial weight already matches the incumbent are skipped; weights only
/// grow along a branch, so the result is the same.
pub fn assignment_minimum_with(
    g: &Graph,
    dv: &DegeneracyView,
    cfg: &SearchConfig,
    prune: bool,
) -> Result<(CliqueCover, SearchStats), Timeout> {
    let mut s = CandidateSearch::new(g, dv, cfg);
    s.am = Some(AssignmentMinimum { best: None, prune });
    if cfg.expired() {
        return Err(Timeout);
    }
    let budget = g.edge_count() - s.trivial;
    s.node(budget, 0, dv.order().len())?;
    let mut stats = s.stats;
    stats.k = Some(budget + s.trivial);
    stats.runs = 1;
    let cliques = match s.am.and_then(|am| am.best) {
        Some((_, cliques)) => cliques,
        None => Vec::new(),
    };
    let cover = CliqueCover::from_cliques(g, cliques).expect("search emits cliques of g");
    Ok((cover, stats))
}

pub fn assignment_minimum(g: &Graph, dv: &DegeneracyView) -> CliqueCover {
    assignment_minimum_with(g, dv, &SearchConfig::default(), true)
        .expect("no deadline")
        .0
}
