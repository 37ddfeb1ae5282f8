//! Small named graphs used throughout the tests and examples.

use crate::cover::Clique;
use crate::graph::{Graph, Vertex};

/// Six vertices, ten edges: a triangle `{1,3,5}`, a triangle `{2,3,4}` and
/// a `K4` on `{3,4,5,6}` sharing vertices. Labels are `1..=6`.
pub fn g6() -> Graph {
    Graph::from_edges(&[
        (1, 5),
        (1, 3),
        (2, 3),
        (2, 4),
        (3, 4),
        (3, 5),
        (3, 6),
        (4, 5),
        (4, 6),
        (5, 6),
    ])
    .expect("valid edge list")
}

pub fn complete(n: usize) -> Graph {
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::with_vertex_count(n, &pairs).expect("valid edge list")
}

pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::with_vertex_count(n, &pairs).expect("valid edge list")
}

pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::with_vertex_count(n, &pairs).expect("valid edge list")
}

/// `rows × cols` grid.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                pairs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                pairs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::with_vertex_count(rows * cols, &pairs).expect("valid edge list")
}

/// Cliques given by original labels of `g`.
pub fn labelled(g: &Graph, cliques: &[&[u64]]) -> Vec<Clique> {
    cliques
        .iter()
        .map(|c| {
            Clique::new(
                c.iter()
                    .map(|&l| g.vertex_of(l).expect("known label"))
                    .collect(),
            )
        })
        .collect()
}
