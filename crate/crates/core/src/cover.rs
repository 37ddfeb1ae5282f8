//! Clique covers, candidate clique sets and the structural validators for
//! locally minimal covers.

use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::graph::{DegeneracyView, EdgeId, Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("clique contains non-adjacent pair ({0}, {1})")]
    NotAClique(u64, u64),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(u64),
    #[error("cover leaves {0} edge(s) uncovered")]
    Incomplete(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Vertex set of a clique, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clique(Vec<Vertex>);

impl Clique {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Clique(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Clique) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// All unordered vertex pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(move |(i, &u)| self.0[i + 1..].iter().map(move |&v| (u, v)))
    }

    fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    fn remove(&mut self, v: Vertex) {
        if let Ok(i) = self.0.binary_search(&v) {
            self.0.remove(i);
        }
    }
}

impl From<Vec<Vertex>> for Clique {
    fn from(v: Vec<Vertex>) -> Self {
        Clique::new(v)
    }
}

/// Ordered list of cliques with per-edge coverage counts.
///
/// An edge is covered when its count is positive. Counts make every mutation
/// exactly reversible, which the search trees rely on. Each edge is owned by
/// one endpoint (the lower id, or the earlier vertex of a degeneracy
/// ordering) and the number of uncovered edges per owner is kept up to date.
#[derive(Debug, Clone)]
pub struct CliqueCover {
    cliques: Vec<Clique>,
    counts: Vec<u32>,
    owner: Vec<Vertex>,
    uncovered_by_owner: Vec<usize>,
    uncovered: usize,
}

impl PartialEq for CliqueCover {
    fn eq(&self, other: &Self) -> bool {
        self.cliques == other.cliques && self.counts == other.counts
    }
}

impl CliqueCover {
    pub fn new(g: &Graph) -> Self {
        Self::with_owners(g, g.edges().iter().map(|&(u, _)| u).collect())
    }

    /// Edges owned by their earlier endpoint in `dv`.
    pub fn oriented(g: &Graph, dv: &DegeneracyView) -> Self {
        Self::with_owners(
            g,
            g.edges().iter().map(|&(u, v)| dv.earlier(u, v)).collect(),
        )
    }

    fn with_owners(g: &Graph, owner: Vec<Vertex>) -> Self {
        let mut uncovered_by_owner = vec![0; g.vertex_count()];
        for &o in &owner {
            uncovered_by_owner[o] += 1;
        }
        CliqueCover {
            cliques: Vec::new(),
            counts: vec![0; g.edge_count()],
            owner,
            uncovered_by_owner,
            uncovered: g.edge_count(),
        }
    }

    /// Validates every clique against `g` and builds the cover.
    pub fn from_cliques(g: &Graph, cliques: Vec<Clique>) -> Result<Self, CoverError> {
        let mut cover = CliqueCover::new(g);
        for c in cliques {
            if let Some(&v) = c.vertices().iter().find(|&&v| v >= g.vertex_count()) {
                return Err(CoverError::UnknownVertex(v as u64));
            }
            if let Some((u, v)) = c.pairs().find(|&(u, v)| !g.has_edge(u, v)) {
                return Err(CoverError::NotAClique(g.label(u), g.label(v)));
            }
            cover.push_clique(g, c);
        }
        Ok(cover)
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn clique(&self, l: usize) -> &Clique {
        &self.cliques[l]
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn into_cliques(self) -> Vec<Clique> {
        self.cliques
    }

    pub fn weight(&self) -> usize {
        cover_weight(&self.cliques)
    }

    /// Number of cliques containing edge `e`.
    pub fn count(&self, e: EdgeId) -> u32 {
        self.counts[e]
    }

    pub fn is_covered(&self, e: EdgeId) -> bool {
        self.counts[e] > 0
    }

    pub fn uncovered(&self) -> usize {
        self.uncovered
    }

    pub fn is_complete(&self) -> bool {
        self.uncovered == 0
    }

    /// Uncovered edges owned by `v`.
    pub fn uncovered_owned(&self, v: Vertex) -> usize {
        self.uncovered_by_owner[v]
    }

    fn bump(&mut self, g: &Graph, u: Vertex, v: Vertex) {
        let e = g.edge_id(u, v).expect("clique members must be adjacent");
        if self.counts[e] == 0 {
            self.uncovered -= 1;
            self.uncovered_by_owner[self.owner[e]] -= 1;
        }
        self.counts[e] += 1;
    }

    fn drop_count(&mut self, g: &Graph, u: Vertex, v: Vertex) {
        let e = g.edge_id(u, v).expect("clique members must be adjacent");
        self.counts[e] -= 1;
        if self.counts[e] == 0 {
            self.uncovered += 1;
            self.uncovered_by_owner[self.owner[e]] += 1;
        }
    }

    /// Appends a clique and returns its index.
    pub fn push_clique(&mut self, g: &Graph, clique: Clique) -> usize {
        for (u, v) in clique.pairs() {
            self.bump(g, u, v);
        }
        self.cliques.push(clique);
        self.cliques.len() - 1
    }

    /// Removes the most recently added clique.
    pub fn pop_clique(&mut self, g: &Graph) -> Option<Clique> {
        let clique = self.cliques.pop()?;
        for (u, v) in clique.pairs() {
            self.drop_count(g, u, v);
        }
        Some(clique)
    }

    /// Adds `v` to clique `l`, covering its edges to the members. Returns
    /// false when `v` was already a member.
    pub fn insert_vertex(&mut self, g: &Graph, l: usize, v: Vertex) -> bool {
        if self.cliques[l].contains(v) {
            return false;
        }
        let members = std::mem::take(&mut self.cliques[l].0);
        for &w in &members {
            self.bump(g, v, w);
        }
        self.cliques[l].0 = members;
        self.cliques[l].insert(v);
        true
    }

    /// Inverse of [`insert_vertex`](Self::insert_vertex).
    pub fn remove_vertex(&mut self, g: &Graph, l: usize, v: Vertex) {
        if !self.cliques[l].contains(v) {
            return;
        }
        self.cliques[l].remove(v);
        let members = std::mem::take(&mut self.cliques[l].0);
        for &w in &members {
            self.drop_count(g, v, w);
        }
        self.cliques[l].0 = members;
    }
}

/// Σ|C_l|.
pub fn cover_weight(cliques: &[Clique]) -> usize {
    cliques.iter().map(Clique::len).sum()
}

/// True iff every edge of `g` lies in some clique. Fails when a clique
/// contains a non-adjacent pair.
pub fn is_cover(g: &Graph, cliques: &[Clique]) -> Result<bool, CoverError> {
    Ok(CliqueCover::from_cliques(g, cliques.to_vec())?.is_complete())
}

/// Whether clique `c` is a candidate clique of `x`: `x` belongs to it, or
/// all of its members are neighbors of `x`.
pub fn is_candidate(g: &Graph, c: &Clique, x: Vertex) -> bool {
    c.contains(x) || c.vertices().iter().all(|&w| g.has_edge(x, w))
}

/// Per-vertex candidate clique sets `S_x` plus the reverse index
/// `R_l = { z | l ∈ S_z }`. Both sides are sorted vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateCliqueSets {
    sets: Vec<Vec<usize>>,
    reverse: Vec<Vec<Vertex>>,
    mass: usize,
}

impl CandidateCliqueSets {
    pub fn new(n: usize) -> Self {
        CandidateCliqueSets {
            sets: vec![Vec::new(); n],
            reverse: Vec::new(),
            mass: 0,
        }
    }

    /// `S_x` for each vertex by direct test of every (vertex, clique) pair.
    pub fn from_scratch(g: &Graph, cliques: &[Clique]) -> Self {
        let mut ccs = CandidateCliqueSets::new(g.vertex_count());
        ccs.reserve_cliques(cliques.len());
        for (l, c) in cliques.iter().enumerate() {
            for x in 0..g.vertex_count() {
                if is_candidate(g, c, x) {
                    ccs.insert(x, l);
                }
            }
        }
        ccs
    }

    /// Makes room in the reverse index for clique ids below `count`.
    pub fn reserve_cliques(&mut self, count: usize) {
        if self.reverse.len() < count {
            self.reverse.resize_with(count, Vec::new);
        }
    }

    /// Drops the reverse entry of the highest clique id, which must already be
    /// absent from every `S_z`.
    pub fn truncate_cliques(&mut self, count: usize) {
        debug_assert!(self.reverse[count..].iter().all(Vec::is_empty));
        self.reverse.truncate(count);
    }

    pub fn set(&self, x: Vertex) -> &[usize] {
        &self.sets[x]
    }

    pub fn reverse(&self, l: usize) -> &[Vertex] {
        self.reverse.get(l).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, x: Vertex, l: usize) -> bool {
        self.sets[x].binary_search(&l).is_ok()
    }

    /// Σ|S_x|.
    pub fn mass(&self) -> usize {
        self.mass
    }

    pub fn insert(&mut self, x: Vertex, l: usize) -> bool {
        self.reserve_cliques(l + 1);
        match self.sets[x].binary_search(&l) {
            Ok(_) => false,
            Err(i) => {
                self.sets[x].insert(i, l);
                let r = &mut self.reverse[l];
                let j = r.binary_search(&x).unwrap_err();
                r.insert(j, x);
                self.mass += 1;
                true
            }
        }
    }

    pub fn remove(&mut self, x: Vertex, l: usize) -> bool {
        match self.sets[x].binary_search(&l) {
            Ok(i) => {
                self.sets[x].remove(i);
                let r = &mut self.reverse[l];
                let j = r.binary_search(&x).expect("reverse index out of sync");
                r.remove(j);
                self.mass -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// `S_x ∩ S_y`, ascending.
    pub fn intersection(&self, x: Vertex, y: Vertex) -> Vec<usize> {
        let (a, b) = (&self.sets[x], &self.sets[y]);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Checks `l ∈ S_x ⇔ x ∈ R_l`.
    pub fn is_consistent(&self) -> bool {
        let forward: usize = self.sets.iter().map(Vec::len).sum();
        let backward: usize = self.reverse.iter().map(Vec::len).sum();
        forward == self.mass
            && backward == self.mass
            && self
                .reverse
                .iter()
                .enumerate()
                .all(|(l, r)| r.iter().all(|&x| self.contains(x, l)))
    }
}

/// Outcome of the three necessary conditions for local minimality.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalMinimalityReport {
    /// Vertices appearing in more cliques than their degree: `(vertex, appearances)`.
    pub overused_vertices: Vec<(Vertex, usize)>,
    /// Pairs `(i, j)` with `C_i ⊆ C_j`.
    pub nested: Vec<(usize, usize)>,
    /// Pairs `(i, j)` where every cross pair of distinct vertices is an edge.
    pub fully_joined: Vec<(usize, usize)>,
}

impl LocalMinimalityReport {
    pub fn passes(&self) -> bool {
        self.overused_vertices.is_empty() && self.nested.is_empty() && self.fully_joined.is_empty()
    }
}

/// Runs the degree bound, the no-nesting test and the non-adjacent cross
/// pair test. Passing is necessary, not sufficient, for local minimality.
pub fn validate_locally_minimal(g: &Graph, cliques: &[Clique]) -> LocalMinimalityReport {
    let mut report = LocalMinimalityReport::default();
    let mut appearances = vec![0usize; g.vertex_count()];
    for c in cliques {
        for &v in c.vertices() {
            appearances[v] += 1;
        }
    }
    for (v, &a) in appearances.iter().enumerate() {
        if a > g.degree(v) {
            report.overused_vertices.push((v, a));
        }
    }
    for (i, ci) in cliques.iter().enumerate() {
        for (j, cj) in cliques.iter().enumerate() {
            if i != j && ci.is_subset_of(cj) {
                report.nested.push((i, j));
            }
            if i < j {
                let separated = ci
                    .vertices()
                    .iter()
                    .any(|&x| cj.vertices().iter().any(|&y| x != y && !g.has_edge(x, y)));
                if !separated {
                    report.fully_joined.push((i, j));
                }
            }
        }
    }
    report
}

/// Writes the cover file: a `# cliques=<k> weight=<w>` header then one clique
/// per line as space separated original labels.
pub fn format_cover(g: &Graph, cliques: &[Clique]) -> String {
    let mut out = format!(
        "# cliques={} weight={}\n",
        cliques.len(),
        cover_weight(cliques)
    );
    for c in cliques {
        let labels: Vec<String> = c
            .vertices()
            .iter()
            .map(|&v| g.label(v).to_string())
            .collect();
        let _ = writeln!(out, "{}", labels.join(" "));
    }
    out
}

/// Reads a cover file written by [`format_cover`], mapping labels through `g`.
pub fn parse_cover<R: BufRead>(g: &Graph, reader: R) -> Result<Vec<Clique>, CoverError> {
    let mut cliques = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CoverError::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut vertices = Vec::new();
        for field in trimmed.split_whitespace() {
            let label: u64 = field.parse().map_err(|_| CoverError::Parse {
                line: i + 1,
                msg: format!("{field:?} is not a vertex label"),
            })?;
            vertices.push(g.vertex_of(label).ok_or(CoverError::UnknownVertex(label))?);
        }
        cliques.push(Clique::new(vertices));
    }
    Ok(cliques)
}
