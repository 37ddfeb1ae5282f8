//! Maximal clique enumeration on small induced subgraphs.
//!
//! Bron–Kerbosch with Tomita pivoting over local bitsets. The search-tree
//! solver only ever asks for maximal cliques through a fixed edge `{x, y}`
//! restricted to a set of common neighbors, so `x` and `y` are pre-seeded
//! into the growing clique.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::cover::Clique;
use crate::graph::{DegeneracyView, Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MceError {
    #[error("anchor ({0}, {1}) is not an edge")]
    AnchorNotEdge(Vertex, Vertex),
    #[error("candidate {0} is not adjacent to both anchor vertices")]
    CandidateNotCommon(Vertex),
}

/// Subgraph induced by `candidates ∪ {x, y}` for anchor edge `{x, y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraphSpec {
    pub anchor: (Vertex, Vertex),
    pub candidates: Vec<Vertex>,
}

impl InducedSubgraphSpec {
    pub fn new(x: Vertex, y: Vertex, candidates: Vec<Vertex>) -> Self {
        InducedSubgraphSpec {
            anchor: (x, y),
            candidates,
        }
    }

    /// `(N_d(x) ∩ N(y)) ∪ {x, y}`.
    pub fn later_common(g: &Graph, dv: &DegeneracyView, x: Vertex, y: Vertex) -> Self {
        let candidates = dv
            .later_neighbors(x)
            .iter()
            .copied()
            .filter(|&z| z != y && g.has_edge(y, z))
            .collect();
        InducedSubgraphSpec::new(x, y, candidates)
    }

    fn validate(&self, g: &Graph) -> Result<(), MceError> {
        let (x, y) = self.anchor;
        if x == y || !g.has_edge(x, y) {
            return Err(MceError::AnchorNotEdge(x, y));
        }
        match self
            .candidates
            .iter()
            .find(|&&z| z == x || z == y || !g.has_edge(x, z) || !g.has_edge(y, z))
        {
            Some(&z) => Err(MceError::CandidateNotCommon(z)),
            None => Ok(()),
        }
    }
}

/// Largest number of maximal cliques an `s`-vertex graph can have.
pub fn moon_moser_bound(s: usize) -> u64 {
    match (s, s % 3) {
        (0 | 1, _) => 1,
        (_, 0) => 3u64.pow((s / 3) as u32),
        (_, 1) => 4 * 3u64.pow(((s - 4) / 3) as u32),
        _ => 2 * 3u64.pow(((s - 2) / 3) as u32),
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_count(&self, other: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    wi * 64 + b
                })
            })
        })
    }
}

struct Enumerator<'a, F> {
    local: &'a [Vertex],
    adj: Vec<Bits>,
    clique: Vec<Vertex>,
    emit: F,
}

impl<F: FnMut(&[Vertex]) -> ControlFlow<()>> Enumerator<'_, F> {
    fn expand(&mut self, mut p: Bits, mut x: Bits) -> ControlFlow<()> {
        if p.is_empty() {
            if x.is_empty() {
                let mut found = self.clique.clone();
                found.sort_unstable();
                return (self.emit)(&found);
            }
            return ControlFlow::Continue(());
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| (p.and_count(&self.adj[u]), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let branch: Vec<usize> = p.ones().filter(|&v| !self.is_adjacent(pivot, v)).collect();
        for v in branch {
            self.clique.push(self.local[v]);
            let next_p = p.and(&self.adj[v]);
            let next_x = x.and(&self.adj[v]);
            self.expand(next_p, next_x)?;
            self.clique.pop();
            p.clear(v);
            x.set(v);
        }
        ControlFlow::Continue(())
    }

    fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].0[v / 64] & (1 << (v % 64)) != 0
    }
}

/// Calls `emit` with every maximal clique of the subgraph induced by
/// `seed ∪ candidates` that contains `seed` and no vertex of `excluded`
/// could extend. All of `candidates` and `excluded` must be adjacent to
/// every seed vertex. Cliques arrive sorted by vertex id; the enumeration
/// stops as soon as `emit` breaks.
pub fn for_each_maximal_clique(
    g: &Graph,
    seed: &[Vertex],
    candidates: &[Vertex],
    excluded: &[Vertex],
    emit: impl FnMut(&[Vertex]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let local: Vec<Vertex> = candidates.iter().chain(excluded).copied().collect();
    let adj = local
        .iter()
        .map(|&u| {
            let mut row = Bits::empty(local.len());
            for (j, &v) in local.iter().enumerate() {
                if u != v && g.has_edge(u, v) {
                    row.set(j);
                }
            }
            row
        })
        .collect();
    let mut p = Bits::empty(local.len());
    for i in 0..candidates.len() {
        p.set(i);
    }
    let mut x = Bits::empty(local.len());
    for i in candidates.len()..local.len() {
        x.set(i);
    }
    let mut run = Enumerator {
        local: &local,
        adj,
        clique: seed.to_vec(),
        emit,
    };
    run.expand(p, x)
}

/// Maximal cliques through the anchor edge in the induced subgraph, in
/// lexicographic order of their sorted vertex lists.
pub fn maximal_cliques_containing_edge(
    g: &Graph,
    spec: &InducedSubgraphSpec,
) -> Result<Vec<Clique>, MceError> {
    spec.validate(g)?;
    let (x, y) = spec.anchor;
    let mut found = Vec::new();
    let _ = for_each_maximal_clique(g, &[x, y], &spec.candidates, &[], |c| {
        found.push(Clique::new(c.to_vec()));
        ControlFlow::Continue(())
    });
    found.sort_unstable();
    assert!(
        found.len() as u64 <= moon_moser_bound(spec.candidates.len()),
        "{} maximal cliques on {} candidates",
        found.len(),
        spec.candidates.len()
    );
    Ok(found)
}

/// All maximal cliques of `g` with at least two vertices, sorted. Each
/// vertex seeds a search over its later neighbors with its earlier
/// neighbors excluded, so every clique is reported once.
pub fn maximal_cliques(g: &Graph) -> Vec<Clique> {
    let dv = DegeneracyView::new(g);
    let mut found = Vec::new();
    for &v in dv.order() {
        let earlier: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| dv.precedes(w, v))
            .collect();
        let _ = for_each_maximal_clique(g, &[v], dv.later_neighbors(v), &earlier, |c| {
            if c.len() >= 2 {
                found.push(Clique::new(c.to_vec()));
            }
            ControlFlow::Continue(())
        });
    }
    found.sort_unstable();
    found
}
