//! Immutable undirected simple graphs, degeneracy orderings, `G(n, p)`
//! generation and edge-list ingestion.
//!
//! Vertices are dense `0..n` ids. Graphs built from labelled edge lists keep a
//! remap table so covers can be written back with the original labels.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(u64),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("probability {0} is not in [0, 1]")]
    BadProbability(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How neighbor membership is answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdjacencyMode {
    /// Hash map per vertex: expected O(1) membership and edge-id lookup.
    #[default]
    Hashed,
    /// Binary search over the sorted neighbor list; no extra memory.
    Sorted,
}

/// Undirected simple graph.
///
/// Neighbor lists are sorted by vertex id so every traversal is
/// deterministic. Edge ids follow first appearance in the input.
#[derive(Debug, Clone)]
pub struct Graph {
    neighbors: Vec<Vec<Vertex>>,
    // edge id of (v, neighbors[v][i]) at neighbor_edges[v][i]
    neighbor_edges: Vec<Vec<EdgeId>>,
    index: Option<Vec<HashMap<Vertex, EdgeId>>>,
    edges: Vec<(Vertex, Vertex)>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph from labelled pairs. Labels are remapped to dense ids in
    /// ascending label order; duplicates and reversed pairs collapse.
    pub fn from_edges(pairs: &[(u64, u64)]) -> Result<Self, GraphError> {
        if let Some(&(u, _)) = pairs.iter().find(|(u, v)| u == v) {
            return Err(GraphError::SelfLoop(u));
        }
        let labels: Vec<u64> = pairs
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let dense: HashMap<u64, Vertex> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let edges: Vec<(Vertex, Vertex)> =
            pairs.iter().map(|(u, v)| (dense[u], dense[v])).collect();
        Self::build(labels, &edges, AdjacencyMode::Hashed)
    }

    /// Builds a graph on vertices `0..n` from dense pairs. Vertices that appear
    /// in no pair stay isolated.
    pub fn with_vertex_count(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        Self::with_mode(n, pairs, AdjacencyMode::Hashed)
    }

    pub fn with_mode(
        n: usize,
        pairs: &[(Vertex, Vertex)],
        mode: AdjacencyMode,
    ) -> Result<Self, GraphError> {
        for &(u, v) in pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u as u64));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        Self::build((0..n as u64).collect(), pairs, mode)
    }

    fn build(
        labels: Vec<u64>,
        pairs: &[(Vertex, Vertex)],
        mode: AdjacencyMode,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut seen: HashMap<(Vertex, Vertex), EdgeId> = HashMap::with_capacity(pairs.len());
        let mut edges = Vec::new();
        for &(u, v) in pairs {
            let key = (u.min(v), u.max(v));
            seen.entry(key).or_insert_with(|| {
                edges.push(key);
                edges.len() - 1
            });
        }
        let mut lists: Vec<Vec<(Vertex, EdgeId)>> = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            lists[u].push((v, e));
            lists[v].push((u, e));
        }
        let mut neighbors = Vec::with_capacity(n);
        let mut neighbor_edges = Vec::with_capacity(n);
        for mut list in lists {
            list.sort_unstable();
            neighbors.push(list.iter().map(|p| p.0).collect::<Vec<_>>());
            neighbor_edges.push(list.iter().map(|p| p.1).collect::<Vec<_>>());
        }
        let index = match mode {
            AdjacencyMode::Hashed => Some(
                neighbors
                    .iter()
                    .zip(&neighbor_edges)
                    .map(|(ns, es)| ns.iter().copied().zip(es.iter().copied()).collect())
                    .collect(),
            ),
            AdjacencyMode::Sorted => None,
        };
        Ok(Graph {
            neighbors,
            neighbor_edges,
            index,
            edges,
            labels,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn mode(&self) -> AdjacencyMode {
        if self.index.is_some() {
            AdjacencyMode::Hashed
        } else {
            AdjacencyMode::Sorted
        }
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(min, max)` pairs, indexed by edge id.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        match &self.index {
            Some(index) => index[u].get(&v).copied(),
            None => self.neighbors[u]
                .binary_search(&v)
                .ok()
                .map(|i| self.neighbor_edges[u][i]),
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match &self.index {
            Some(index) => index[u].contains_key(&v),
            None => self.neighbors[u].binary_search(&v).is_ok(),
        }
    }

    pub fn label(&self, v: Vertex) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id of an original label, if present.
    pub fn vertex_of(&self, label: u64) -> Option<Vertex> {
        self.labels.binary_search(&label).ok()
    }

    /// Sorted common neighbors of `u` and `v`.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors[a]
            .iter()
            .copied()
            .filter(|&w| self.has_edge(b, w))
            .collect()
    }

    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && self.has_edge(u, v))
        })
    }

    /// Edge-list text with original labels, one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }
}

/// Parses the whitespace separated `u v` edge-list format. Lines starting
/// with `#` and blank lines are skipped.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next = || -> Result<u64, GraphError> {
            let field = fields.next().ok_or_else(|| GraphError::Parse {
                line: i + 1,
                msg: format!("expected two vertex ids, got {trimmed:?}"),
            })?;
            field.parse().map_err(|_| GraphError::Parse {
                line: i + 1,
                msg: format!("{field:?} is not a nonnegative integer"),
            })
        };
        let u = next()?;
        let v = next()?;
        if u == v {
            return Err(GraphError::Parse {
                line: i + 1,
                msg: format!("self-loop ({u}, {v})"),
            });
        }
        pairs.push((u, v));
    }
    Graph::from_edges(&pairs)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let file = std::fs::File::open(path)?;
    parse_edge_list(std::io::BufReader::new(file))
}

/// Degeneracy ordering together with the later-neighbor lists `N_d`.
#[derive(Debug, Clone)]
pub struct DegeneracyView {
    order: Vec<Vertex>,
    position: Vec<usize>,
    degeneracy: usize,
    later: Vec<Vec<Vertex>>,
}

impl DegeneracyView {
    /// Minimum-degree peeling. Ties go to the lowest vertex id.
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut buckets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); g.max_degree() + 1];
        for v in 0..n {
            buckets[degree[v]].insert(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0;
        let mut low: usize = 0;
        for _ in 0..n {
            // a removal lowers neighbor degrees by one, so the minimum can drop by at most one
            low = low.saturating_sub(1);
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop_first().expect("nonempty bucket");
            degeneracy = degeneracy.max(low);
            removed[v] = true;
            order.push(v);
            for &w in g.neighbors(v) {
                if !removed[w] {
                    buckets[degree[w]].remove(&w);
                    degree[w] -= 1;
                    buckets[degree[w]].insert(w);
                }
            }
        }
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let later = (0..n)
            .map(|v| {
                let mut ns: Vec<Vertex> = g
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| position[w] > position[v])
                    .collect();
                ns.sort_unstable_by_key(|&w| position[w]);
                ns
            })
            .collect();
        DegeneracyView {
            order,
            position,
            degeneracy,
            later,
        }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    /// `N_d(v)`, sorted by position in the ordering.
    pub fn later_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.later[v]
    }

    pub fn precedes(&self, u: Vertex, v: Vertex) -> bool {
        self.position[u] < self.position[v]
    }

    /// Of the two endpoints, the one placed earlier.
    pub fn earlier(&self, u: Vertex, v: Vertex) -> Vertex {
        if self.precedes(u, v) {
            u
        } else {
            v
        }
    }
}

/// `G(n, p)` with a ChaCha8 stream seeded by `seed`. Pairs are visited in
/// lexicographic order, one uniform draw each.
pub fn gnp_generate(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::BadProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    Graph::with_vertex_count(n, &pairs)
}

/// Edges whose endpoints have no common neighbor. Each one must be its own
/// 2-clique in every cover. Returned in edge-id order.
pub fn trivial_cliques(g: &Graph) -> Vec<(Vertex, Vertex)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| is_trivial_edge(g, u, v))
        .collect()
}

pub fn is_trivial_edge(g: &Graph, u: Vertex, v: Vertex) -> bool {
    let (a, b) = if g.degree(u) <= g.degree(v) {
        (u, v)
    } else {
        (v, u)
    };
    !g.neighbors(a).iter().any(|&w| w != b && g.has_edge(b, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn g6() -> Graph {
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
        .unwrap()
    }

    #[test]
    fn six_vertex_graph() {
        let g = g6();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.labels(), &[1, 2, 3, 4, 5, 6]);
        assert!(g.has_edge(g.vertex_of(3).unwrap(), g.vertex_of(6).unwrap()));
        assert!(!g.has_edge(g.vertex_of(1).unwrap(), g.vertex_of(6).unwrap()));
    }

    #[test]
    fn empty_and_duplicate_input() {
        let g = Graph::from_edges(&[]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
        let g = Graph::from_edges(&[(7, 9), (9, 7), (7, 9)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn self_loop_rejected() {
        let err = Graph::from_edges(&[(1, 2), (4, 4)]).unwrap_err();
        assert!(err.to_string().contains("(4, 4)"), "{err}");
        assert!(Graph::with_vertex_count(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn sorted_mode_agrees_with_hashed() {
        let pairs: Vec<_> = gnp_generate(20, 0.3, 5).unwrap().edges().to_vec();
        let a = Graph::with_mode(20, &pairs, AdjacencyMode::Hashed).unwrap();
        let b = Graph::with_mode(20, &pairs, AdjacencyMode::Sorted).unwrap();
        assert_eq!(b.mode(), AdjacencyMode::Sorted);
        for u in 0..20 {
            for v in 0..20 {
                assert_eq!(a.has_edge(u, v), b.has_edge(u, v));
                assert_eq!(a.edge_id(u, v), b.edge_id(u, v));
            }
        }
    }

    #[test]
    fn parse_skips_comments_and_reports_lines() {
        let g = parse_edge_list("# header\n1 2\n\n2 3\n3\t1\n".as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 3);
        let err = parse_edge_list("1 2\n3 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        let err = parse_edge_list("1 1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(DegeneracyView::new(&g6()).degeneracy(), 3);
        let k5: Vec<_> = (0..5)
            .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
            .collect();
        assert_eq!(
            DegeneracyView::new(&Graph::with_vertex_count(5, &k5).unwrap()).degeneracy(),
            4
        );
        let path = Graph::with_vertex_count(3, &[(0, 1), (1, 2)]).unwrap();
        let dv = DegeneracyView::new(&path);
        assert_eq!(dv.degeneracy(), 1);
        // endpoint 0 has minimum degree and lowest id
        assert_eq!(dv.order()[0], 0);
        assert_eq!(dv.later_neighbors(0), &[1]);
    }

    #[test]
    fn tie_break_is_lowest_id() {
        // 4-cycle: all degrees equal
        let g = Graph::with_vertex_count(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let dv = DegeneracyView::new(&g);
        assert_eq!(dv.order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gnp_generate(10, 0.0, 3).unwrap().edge_count(), 0);
        assert_eq!(gnp_generate(10, 1.0, 3).unwrap().edge_count(), 45);
        let a = gnp_generate(40, 0.2, 11).unwrap();
        let b = gnp_generate(40, 0.2, 11).unwrap();
        let c = gnp_generate(40, 0.2, 12).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_ne!(a.edges(), c.edges());
        assert!(gnp_generate(3, 1.5, 0).is_err());
    }

    #[test]
    fn trivial_examples() {
        let path = Graph::with_vertex_count(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(trivial_cliques(&path).len(), 2);
        let k3 = Graph::with_vertex_count(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(trivial_cliques(&k3).is_empty());
        assert!(trivial_cliques(&g6()).is_empty());
    }
}
