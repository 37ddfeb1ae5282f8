use ecc::cover::{is_cover, validate_locally_minimal, CandidateCliqueSets, Clique};
use ecc::graph::{gnp_generate, DegeneracyView, Graph};
use ecc::greedy::{
    basic_greedy, basic_greedy_traced, degeneracy_greedy, degeneracy_greedy_with, improved_greedy,
    improved_greedy_locally_minimal, improved_greedy_traced, post_process, CliqueSelectPolicy,
    EdgeOrderPolicy,
};
use proptest::prelude::*;

const FROZEN_MASS_FACTOR: f64 = 1.0;

fn policies(seed: u64) -> [CliqueSelectPolicy; 4] {
    [
        CliqueSelectPolicy::Smallest,
        CliqueSelectPolicy::Largest,
        CliqueSelectPolicy::Earliest,
        CliqueSelectPolicy::Random(seed),
    ]
}

/// Cliques that `{x, y}` could join, by checking each one directly.
fn absorbers(g: &Graph, cliques: &[Clique], x: usize, y: usize) -> Vec<usize> {
    cliques
        .iter()
        .enumerate()
        .filter(|(_, c)| match (c.contains(x), c.contains(y)) {
            (true, true) => true,
            (true, false) => c.vertices().iter().all(|&z| z == x || g.has_edge(z, y)),
            (false, true) => c.vertices().iter().all(|&z| z == y || g.has_edge(z, x)),
            (false, false) => c
                .vertices()
                .iter()
                .all(|&z| g.has_edge(z, x) && g.has_edge(z, y)),
        })
        .map(|(l, _)| l)
        .collect()
}

fn edge_set(c: &Clique) -> Vec<(usize, usize)> {
    c.pairs().collect()
}

#[test]
fn basic_and_improved_agree_before_post_processing() {
    for seed in 0..20 {
        let g = gnp_generate(12, 0.3, seed).unwrap();
        for select in policies(seed) {
            for order in [EdgeOrderPolicy::DegreeAscending, EdgeOrderPolicy::Input] {
                let (a, _) = basic_greedy(&g, order, select);
                let (b, _) = improved_greedy_locally_minimal(&g, order, select);
                assert_eq!(a.cliques(), b.cliques(), "seed {seed} {order}/{select}");
            }
        }
    }
}

#[test]
fn degeneracy_variant_matches_basic_in_degeneracy_order() {
    for seed in 0..30 {
        let g = gnp_generate(14, 0.35, seed).unwrap();
        for select in policies(seed) {
            let (a, _) = basic_greedy(&g, EdgeOrderPolicy::Degeneracy, select);
            let (b, _) = degeneracy_greedy(&g, select);
            assert_eq!(a.cliques(), b.cliques(), "seed {seed} {select}");
        }
    }
}

#[test]
fn intersection_detects_absorbing_cliques() {
    for seed in 0..15 {
        let g = gnp_generate(9, 0.35, seed).unwrap();
        let check = |step: &ecc::greedy::GreedyStep<'_>| {
            assert_eq!(
                step.candidates,
                absorbers(&g, step.cliques, step.x, step.y).as_slice()
            );
        };
        basic_greedy_traced(
            &g,
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Largest,
            check,
        );
        improved_greedy_traced(
            &g,
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Smallest,
            false,
            check,
        );
        let dv = DegeneracyView::new(&g);
        degeneracy_greedy_with(&g, &dv, CliqueSelectPolicy::Earliest, false, check);
    }
}

#[test]
fn maintained_sets_match_definition() {
    for seed in 0..15 {
        let g = gnp_generate(12, 0.4, seed).unwrap();
        improved_greedy_traced(
            &g,
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Largest,
            false,
            |step| {
                let sets = step.sets.expect("incremental solver exposes its sets");
                let scratch = CandidateCliqueSets::from_scratch(&g, step.cliques);
                for z in 0..g.vertex_count() {
                    assert_eq!(sets.set(z), scratch.set(z), "seed {seed} vertex {z}");
                }
                assert!(sets.is_consistent());
            },
        );
    }
}

#[test]
fn redundant_cliques_need_three_others() {
    for seed in 0..40 {
        let g = gnp_generate(10, 0.45, seed).unwrap();
        let (cover, _) = basic_greedy(
            &g,
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Largest,
        );
        let cliques = cover.cliques();
        if cliques.len() > 12 {
            continue;
        }
        for (l, c) in cliques.iter().enumerate() {
            let others: Vec<usize> = (0..cliques.len()).filter(|&j| j != l).collect();
            for (i, &a) in others.iter().enumerate() {
                for &b in std::iter::once(&a).chain(&others[i + 1..]) {
                    let covered = edge_set(c).iter().all(|&(u, v)| {
                        [a, b]
                            .iter()
                            .any(|&j| cliques[j].contains(u) && cliques[j].contains(v))
                    });
                    assert!(!covered, "seed {seed}: clique {l} covered by {a} and {b}");
                }
            }
        }
    }
}

#[test]
fn edge_appearances_bounded_by_smaller_degree() {
    for seed in 0..20 {
        let g = gnp_generate(20, 0.3, seed).unwrap();
        let (cover, _) = basic_greedy(
            &g,
            EdgeOrderPolicy::DegreeAscending,
            CliqueSelectPolicy::Smallest,
        );
        let appearances: u64 = (0..g.edge_count()).map(|e| u64::from(cover.count(e))).sum();
        let bound: usize = g
            .edges()
            .iter()
            .map(|&(u, v)| g.degree(u).min(g.degree(v)))
            .sum();
        assert!(appearances <= bound as u64);
    }
}

#[test]
fn candidate_mass_within_frozen_factor() {
    for seed in 0..10 {
        for (n, p) in [(40, 0.3), (80, 0.1)] {
            let g = gnp_generate(n, p, seed).unwrap();
            let m = g.edge_count() as f64;
            let (c, s) = improved_greedy(
                &g,
                EdgeOrderPolicy::DegreeAscending,
                CliqueSelectPolicy::Largest,
            );
            let budget = m + c.len() as f64 * g.max_degree() as f64;
            assert!(s.ccs_max.unwrap() as f64 <= FROZEN_MASS_FACTOR * budget);
            let (c, s) = degeneracy_greedy(&g, CliqueSelectPolicy::Largest);
            let d = s.d.unwrap() as f64;
            assert!(s.ccs_max.unwrap() as f64 <= FROZEN_MASS_FACTOR * (m + c.len() as f64 * d));
            let tsi_bound: usize = g
                .edges()
                .iter()
                .map(|&(u, v)| g.degree(u).min(g.degree(v)))
                .sum();
            assert!(s.ccs_tsi.unwrap() <= tsi_bound);
        }
    }
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..14, 0.05f64..0.8, any::<u64>())
        .prop_map(|(n, p, seed)| gnp_generate(n, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn post_processing_is_a_fixed_point(g in small_graph(), pick in 0usize..4, seed in any::<u64>()) {
        let select = policies(seed)[pick];
        let (raw, _) = basic_greedy(&g, EdgeOrderPolicy::DegreeAscending, select);
        let once = post_process(&g, raw.cliques()).unwrap();
        prop_assert_eq!(is_cover(&g, once.cliques()), Ok(true));
        let twice = post_process(&g, once.cliques()).unwrap();
        prop_assert_eq!(once.cliques(), twice.cliques());
        prop_assert!(once.len() <= raw.len());
    }

    #[test]
    fn greedy_covers_are_locally_minimal(g in small_graph(), pick in 0usize..4, seed in any::<u64>()) {
        let select = policies(seed)[pick];
        let (a, _) = basic_greedy(&g, EdgeOrderPolicy::DegreeAscending, select);
        let (b, _) = improved_greedy(&g, EdgeOrderPolicy::DegreeAscending, select);
        let (c, _) = degeneracy_greedy(&g, select);
        for cover in [a, b, c] {
            prop_assert_eq!(is_cover(&g, cover.cliques()), Ok(true));
            prop_assert!(validate_locally_minimal(&g, cover.cliques()).passes());
            prop_assert!(cover.weight() <= 2 * g.edge_count());
        }
    }
}
