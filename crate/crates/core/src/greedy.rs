//! Greedy clique-cover solvers built on candidate clique sets.
//!
//! * [`basic_greedy`] recomputes `S_x` and `S_y` from scratch for every
//!   uncovered edge. Quadratic, but it is the reference the faster variants
//!   must agree with.
//! * [`improved_greedy`] (CCSG) maintains the candidate sets incrementally
//!   and post-processes the result into a minimal cover.
//! * [`degeneracy_greedy`] (CCSD) processes edges along a degeneracy
//!   ordering and only propagates candidacy to later neighbors.
//!
//! All three produce locally minimal covers: an uncovered edge is absorbed
//! into an existing clique whenever one can take it, otherwise it starts a
//! new 2-clique.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{is_candidate, CandidateCliqueSets, Clique, CliqueCover, CoverError};
use crate::graph::{is_trivial_edge, DegeneracyView, Graph, Vertex};
use crate::stats::RunStats;

/// Order in which edges are offered to the greedy loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeOrderPolicy {
    /// Vertices by ascending degree (ties by id), each followed by all of its
    /// incident edges.
    #[default]
    DegreeAscending,
    /// `(u_i, N_d(u_i))` for `u_1, u_2, ...` of the degeneracy ordering.
    Degeneracy,
    /// Edge-id order, i.e. first appearance in the input.
    Input,
}

/// Which clique absorbs an edge when several can.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CliqueSelectPolicy {
    Smallest,
    #[default]
    Largest,
    Earliest,
    Random(u64),
}

impl CliqueSelectPolicy {
    pub fn seed(&self) -> Option<u64> {
        match self {
            CliqueSelectPolicy::Random(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeOrderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeOrderPolicy::DegreeAscending => "degree",
            EdgeOrderPolicy::Degeneracy => "degeneracy",
            EdgeOrderPolicy::Input => "input",
        })
    }
}

impl FromStr for EdgeOrderPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree" | "degree-ascending" => Ok(EdgeOrderPolicy::DegreeAscending),
            "degeneracy" => Ok(EdgeOrderPolicy::Degeneracy),
            "input" => Ok(EdgeOrderPolicy::Input),
            _ => Err(format!(
                "unknown edge order {s:?} (expected degree, degeneracy or input)"
            )),
        }
    }
}

impl fmt::Display for CliqueSelectPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliqueSelectPolicy::Smallest => f.write_str("smallest"),
            CliqueSelectPolicy::Largest => f.write_str("largest"),
            CliqueSelectPolicy::Earliest => f.write_str("earliest"),
            CliqueSelectPolicy::Random(_) => f.write_str("random"),
        }
    }
}

impl CliqueSelectPolicy {
    /// Parses `smallest`, `largest`, `earliest` or `random`; the latter takes
    /// `seed`.
    pub fn parse(s: &str, seed: u64) -> Result<Self, String> {
        match s {
            "smallest" => Ok(CliqueSelectPolicy::Smallest),
            "largest" => Ok(CliqueSelectPolicy::Largest),
            "earliest" => Ok(CliqueSelectPolicy::Earliest),
            "random" => Ok(CliqueSelectPolicy::Random(seed)),
            _ => Err(format!(
                "unknown clique selection {s:?} (expected smallest, largest, earliest or random)"
            )),
        }
    }
}

struct Selector {
    policy: CliqueSelectPolicy,
    rng: Option<ChaCha8Rng>,
}

impl Selector {
    fn new(policy: CliqueSelectPolicy) -> Self {
        let rng = policy.seed().map(ChaCha8Rng::seed_from_u64);
        Selector { policy, rng }
    }

    /// `candidates` is ascending and nonempty. Size ties go to the lower index.
    fn pick(&mut self, candidates: &[usize], cliques: &[Clique]) -> usize {
        match self.policy {
            CliqueSelectPolicy::Earliest => candidates[0],
            CliqueSelectPolicy::Smallest => *candidates
                .iter()
                .min_by_key(|&&l| cliques[l].len())
                .expect("nonempty"),
            CliqueSelectPolicy::Largest => *candidates
                .iter()
                .rev()
                .max_by_key(|&&l| cliques[l].len())
                .expect("nonempty"),
            CliqueSelectPolicy::Random(_) => {
                let rng = self.rng.as_mut().expect("seeded");
                candidates[rng.gen_range(0..candidates.len())]
            }
        }
    }
}

/// One iteration of a greedy loop, handed to tracing observers.
#[derive(Debug)]
pub struct GreedyStep<'a> {
    pub x: Vertex,
    pub y: Vertex,
    /// Cliques before the edge is covered.
    pub cliques: &'a [Clique],
    /// `S_x ∩ S_y`, ascending.
    pub candidates: &'a [usize],
    /// Maintained candidate sets, for the incremental solvers.
    pub sets: Option<&'a CandidateCliqueSets>,
}

/// The edge sequence of `order`. Degree-ascending lists every edge twice;
/// the greedy loop skips edges already covered.
pub fn edge_sequence(
    g: &Graph,
    order: EdgeOrderPolicy,
    dv: Option<&DegeneracyView>,
) -> Vec<(Vertex, Vertex)> {
    match order {
        EdgeOrderPolicy::Input => g.edges().to_vec(),
        EdgeOrderPolicy::DegreeAscending => {
            let mut vertices: Vec<Vertex> = (0..g.vertex_count()).collect();
            vertices.sort_by_key(|&v| (g.degree(v), v));
            vertices
                .into_iter()
                .flat_map(|x| g.neighbors(x).iter().map(move |&y| (x, y)))
                .collect()
        }
        EdgeOrderPolicy::Degeneracy => {
            let owned;
            let dv = match dv {
                Some(dv) => dv,
                None => {
                    owned = DegeneracyView::new(g);
                    &owned
                }
            };
            dv.order()
                .iter()
                .flat_map(|&u| dv.later_neighbors(u).iter().map(move |&y| (u, y)))
                .collect()
        }
    }
}

/// Number of cliques that are not trivial 2-cliques.
pub fn nontrivial_count(g: &Graph, cliques: &[Clique]) -> usize {
    cliques
        .iter()
        .filter(|c| !(c.len() == 2 && is_trivial_edge(g, c.vertices()[0], c.vertices()[1])))
        .count()
}

fn finish_stats(
    g: &Graph,
    algorithm: &str,
    order: Option<EdgeOrderPolicy>,
    select: CliqueSelectPolicy,
    cover: &CliqueCover,
    started: Instant,
) -> RunStats {
    RunStats {
        n: g.vertex_count(),
        m: g.edge_count(),
        delta: g.max_degree(),
        algorithm: algorithm.to_string(),
        policy: match order {
            Some(order) => format!("{order}/{select}"),
            None => select.to_string(),
        },
        status: "ok".into(),
        cover_size: Some(cover.len()),
        cover_size_nontrivial: Some(nontrivial_count(g, cover.cliques())),
        weight: Some(cover.weight()),
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
        seed: select.seed(),
        ..Default::default()
    }
}

/// Naive greedy: candidate sets are recomputed from scratch per
/// edge. The result is locally minimal and is not post-processed.
pub fn basic_greedy(
    g: &Graph,
    order: EdgeOrderPolicy,
    select: CliqueSelectPolicy,
) -> (CliqueCover, RunStats) {
    basic_greedy_traced(g, order, select, |_| {})
}

pub fn basic_greedy_traced(
    g: &Graph,
    order: EdgeOrderPolicy,
    select: CliqueSelectPolicy,
    mut observe: impl FnMut(&GreedyStep<'_>),
) -> (CliqueCover, RunStats) {
    let started = Instant::now();
    let mut selector = Selector::new(select);
    let mut cover = CliqueCover::new(g);
    let mut tsi = 0;
    for (x, y) in edge_sequence(g, order, None) {
        let e = g.edge_id(x, y).expect("edge");
        if cover.is_covered(e) {
            continue;
        }
        let candidates: Vec<usize> = cover
            .cliques()
            .iter()
            .enumerate()
            .filter(|(_, c)| is_candidate(g, c, x) && is_candidate(g, c, y))
            .map(|(l, _)| l)
            .collect();
        tsi += candidates.len();
        observe(&GreedyStep {
            x,
            y,
            cliques: cover.cliques(),
            candidates: &candidates,
            sets: None,
        });
        if candidates.is_empty() {
            cover.push_clique(g, Clique::new(vec![x, y]));
        } else {
            let l = selector.pick(&candidates, cover.cliques());
            cover.insert_vertex(g, l, x);
            cover.insert_vertex(g, l, y);
        }
    }
    let mut stats = finish_stats(g, "basic", Some(order), select, &cover, started);
    stats.ccs_tsi = Some(tsi);
    (cover, stats)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Propagation {
    /// Full neighborhoods, scan vertex is the clique's first vertex.
    Neighborhood,
    /// Later neighborhoods only, scan vertex is the earliest member.
    Degeneracy,
}

struct Incremental<'g> {
    g: &'g Graph,
    dv: Option<&'g DegeneracyView>,
    mode: Propagation,
    cover: CliqueCover,
    sets: CandidateCliqueSets,
    scan_root: Vec<Vertex>,
    selector: Selector,
    ccs_max: usize,
    ccs_tsi: usize,
}

impl<'g> Incremental<'g> {
    fn new(
        g: &'g Graph,
        dv: Option<&'g DegeneracyView>,
        mode: Propagation,
        select: CliqueSelectPolicy,
    ) -> Self {
        Incremental {
            g,
            dv,
            mode,
            cover: CliqueCover::new(g),
            sets: CandidateCliqueSets::new(g.vertex_count()),
            scan_root: Vec::new(),
            selector: Selector::new(select),
            ccs_max: 0,
            ccs_tsi: 0,
        }
    }

    fn run(&mut self, sequence: &[(Vertex, Vertex)], observe: &mut impl FnMut(&GreedyStep<'_>)) {
        let g = self.g;
        for &(x, y) in sequence {
            let e = g.edge_id(x, y).expect("edge");
            if self.cover.is_covered(e) {
                continue;
            }
            let candidates = self.sets.intersection(x, y);
            self.ccs_tsi += candidates.len();
            observe(&GreedyStep {
                x,
                y,
                cliques: self.cover.cliques(),
                candidates: &candidates,
                sets: Some(&self.sets),
            });
            if candidates.is_empty() {
                self.open(x, y);
            } else {
                let l = self.selector.pick(&candidates, self.cover.cliques());
                self.absorb(l, x, y);
            }
            self.ccs_max = self.ccs_max.max(self.sets.mass());
        }
    }

    fn absorb(&mut self, l: usize, x: Vertex, y: Vertex) {
        let g = self.g;
        let w = self.scan_root[l];
        let scan = match self.mode {
            Propagation::Neighborhood => g.neighbors(w),
            Propagation::Degeneracy => self.dv.expect("ordering").later_neighbors(w),
        };
        for &z in scan {
            if z != x
                && z != y
                && self.sets.contains(z, l)
                && !(g.has_edge(z, x) && g.has_edge(z, y))
            {
                self.sets.remove(z, l);
            }
        }
        self.cover.insert_vertex(g, l, x);
        self.cover.insert_vertex(g, l, y);
    }

    fn open(&mut self, x: Vertex, y: Vertex) {
        let g = self.g;
        let k = self.cover.push_clique(g, Clique::new(vec![x, y]));
        let (root, reach) = match self.mode {
            Propagation::Neighborhood => (x, g.common_neighbors(x, y)),
            Propagation::Degeneracy => {
                let dv = self.dv.expect("ordering");
                let (a, b) = if dv.precedes(x, y) { (x, y) } else { (y, x) };
                let reach = dv
                    .later_neighbors(a)
                    .iter()
                    .copied()
                    .filter(|&z| g.has_edge(b, z))
                    .collect();
                (a, reach)
            }
        };
        self.scan_root.push(root);
        self.sets.insert(x, k);
        self.sets.insert(y, k);
        for z in reach {
            self.sets.insert(z, k);
        }
    }
}

/// CCSG without the final post-processing: a locally minimal cover that
/// must equal [`basic_greedy`] under the same policies.
pub fn improved_greedy_locally_minimal(
    g: &Graph,
    order: EdgeOrderPolicy,
    select: CliqueSelectPolicy,
) -> (CliqueCover, RunStats) {
    improved_greedy_traced(g, order, select, false, |_| {})
}

/// CCSG: incremental candidate sets, then post-processing into a minimal cover.
pub fn improved_greedy(
    g: &Graph,
    order: EdgeOrderPolicy,
    select: CliqueSelectPolicy,
) -> (CliqueCover, RunStats) {
    improved_greedy_traced(g, order, select, true, |_| {})
}

pub fn improved_greedy_traced(
    g: &Graph,
    order: EdgeOrderPolicy,
    select: CliqueSelectPolicy,
    post: bool,
    mut observe: impl FnMut(&GreedyStep<'_>),
) -> (CliqueCover, RunStats) {
    let started = Instant::now();
    let dv = (order == EdgeOrderPolicy::Degeneracy).then(|| DegeneracyView::new(g));
    let sequence = edge_sequence(g, order, dv.as_ref());
    let mut run = Incremental::new(g, None, Propagation::Neighborhood, select);
    run.run(&sequence, &mut observe);
    let (ccs_max, ccs_tsi) = (run.ccs_max, run.ccs_tsi);
    let mut cover = run.cover;
    if post {
        cover = post_process(g, cover.cliques()).expect("greedy output is a full cover");
    }
    let mut stats = finish_stats(g, "ccsg", Some(order), select, &cover, started);
    stats.ccs_max = Some(ccs_max);
    stats.ccs_tsi = Some(ccs_tsi);
    (cover, stats)
}

/// CCSD with default options: degeneracy edge order, later-neighbor
/// propagation, no post-processing. Every clique has at most `d + 1` vertices.
pub fn degeneracy_greedy(g: &Graph, select: CliqueSelectPolicy) -> (CliqueCover, RunStats) {
    let dv = DegeneracyView::new(g);
    degeneracy_greedy_with(g, &dv, select, false, |_| {})
}

pub fn degeneracy_greedy_with(
    g: &Graph,
    dv: &DegeneracyView,
    select: CliqueSelectPolicy,
    post: bool,
    mut observe: impl FnMut(&GreedyStep<'_>),
) -> (CliqueCover, RunStats) {
    let started = Instant::now();
    let sequence = edge_sequence(g, EdgeOrderPolicy::Degeneracy, Some(dv));
    let mut run = Incremental::new(g, Some(dv), Propagation::Degeneracy, select);
    run.run(&sequence, &mut observe);
    let (ccs_max, ccs_tsi) = (run.ccs_max, run.ccs_tsi);
    let mut cover = run.cover;
    if post {
        cover = post_process(g, cover.cliques()).expect("greedy output is a full cover");
    }
    let mut stats = finish_stats(g, "ccsd", None, select, &cover, started);
    stats.d = Some(dv.degeneracy());
    stats.ccs_max = Some(ccs_max);
    stats.ccs_tsi = Some(ccs_tsi);
    (cover, stats)
}

/// Drops redundant cliques in creation order: a clique all of whose edges
/// appear more than once is discarded and its edges' counts decremented.
/// The result is a minimal cover.
pub fn post_process(g: &Graph, cliques: &[Clique]) -> Result<CliqueCover, CoverError> {
    let mut counts = CliqueCover::from_cliques(g, cliques.to_vec())?;
    if !counts.is_complete() {
        return Err(CoverError::Incomplete(counts.uncovered()));
    }
    let mut kept = CliqueCover::new(g);
    for (l, c) in cliques.iter().enumerate() {
        let redundant = c
            .pairs()
            .all(|(u, v)| counts.count(g.edge_id(u, v).expect("validated")) > 1);
        if redundant {
            // counts is only consulted through edge counts, so dropping the
            // vertices one by one decrements each edge exactly once
            for &v in c.vertices() {
                counts.remove_vertex(g, l, v);
            }
        } else {
            kept.push_clique(g, c.clone());
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::validate_locally_minimal;
    use crate::fixtures::{complete, g6, grid, labelled, path};

    const POLICIES: [CliqueSelectPolicy; 4] = [
        CliqueSelectPolicy::Smallest,
        CliqueSelectPolicy::Largest,
        CliqueSelectPolicy::Earliest,
        CliqueSelectPolicy::Random(7),
    ];

    #[test]
    fn complete_graph_is_one_clique() {
        let g = complete(6);
        for select in POLICIES {
            for order in [
                EdgeOrderPolicy::DegreeAscending,
                EdgeOrderPolicy::Input,
                EdgeOrderPolicy::Degeneracy,
            ] {
                let (c, _) = basic_greedy(&g, order, select);
                assert_eq!(c.cliques(), &[Clique::new((0..6).collect())]);
                let (c, _) = improved_greedy(&g, order, select);
                assert_eq!(c.len(), 1);
            }
            assert_eq!(degeneracy_greedy(&g, select).0.len(), 1);
        }
    }

    #[test]
    fn path_needs_one_clique_per_edge() {
        let (c, _) = basic_greedy(
            &path(3),
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Largest,
        );
        assert_eq!(c.len(), 2);
        assert!(c.cliques().iter().all(|c| c.len() == 2));
    }

    #[test]
    fn six_vertex_graph() {
        let g = g6();
        for select in POLICIES {
            let (c, _) = basic_greedy(&g, EdgeOrderPolicy::DegreeAscending, select);
            assert!((3..=4).contains(&c.len()));
            assert!(c.is_complete());
            assert!(validate_locally_minimal(&g, c.cliques()).passes());
        }
        let (c, _) = improved_greedy(
            &g,
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Largest,
        );
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn triangle_absorbs_third_edge() {
        let (c, _) = improved_greedy(
            &complete(3),
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Largest,
        );
        assert_eq!(c.cliques(), &[Clique::new(vec![0, 1, 2])]);
    }

    #[test]
    fn degeneracy_variant_bounds() {
        let g = g6();
        let (c, stats) = degeneracy_greedy(&g, CliqueSelectPolicy::Largest);
        assert_eq!(stats.d, Some(3));
        assert!(c.cliques().iter().all(|c| c.len() <= 4));
        let grid = grid(5, 5);
        let (c, stats) = degeneracy_greedy(&grid, CliqueSelectPolicy::Largest);
        assert_eq!(stats.d, Some(2));
        assert_eq!(c.len(), 40);
        assert!(c.cliques().iter().all(|c| c.len() == 2));
        // every clique is a trivial edge in a triangle-free graph
        assert_eq!(stats.ccs_max, Some(80));
        assert_eq!(stats.cover_size_nontrivial, Some(0));
    }

    #[test]
    fn post_process_examples() {
        let g = complete(3);
        let input = vec![
            Clique::new(vec![0, 1]),
            Clique::new(vec![1, 2]),
            Clique::new(vec![0, 2]),
            Clique::new(vec![0, 1, 2]),
        ];
        assert_eq!(
            post_process(&g, &input).unwrap().cliques(),
            &[Clique::new(vec![0, 1, 2])]
        );

        let g = g6();
        let minimal = labelled(&g, &[&[1, 3, 5], &[2, 3, 4], &[4, 5, 6], &[3, 6, 5]]);
        assert_eq!(
            post_process(&g, &minimal).unwrap().cliques(),
            minimal.as_slice()
        );

        let partial = labelled(&g, &[&[1, 3, 5]]);
        assert_eq!(
            post_process(&g, &partial).unwrap_err(),
            CoverError::Incomplete(7)
        );
    }

    #[test]
    fn policy_names_round_trip() {
        for order in [
            EdgeOrderPolicy::DegreeAscending,
            EdgeOrderPolicy::Degeneracy,
            EdgeOrderPolicy::Input,
        ] {
            assert_eq!(order.to_string().parse::<EdgeOrderPolicy>(), Ok(order));
        }
        for select in POLICIES {
            assert_eq!(
                CliqueSelectPolicy::parse(&select.to_string(), 7),
                Ok(select)
            );
        }
        assert!("sideways".parse::<EdgeOrderPolicy>().is_err());
    }
}
