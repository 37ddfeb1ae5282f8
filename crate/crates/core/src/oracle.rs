//! Brute-force ground truth for tiny graphs.
//!
//! Cliques are found by testing every vertex subset, then an exhaustive
//! branch-and-bound set cover over edge bitmasks picks the optimum. Nothing
//! here shares code with the greedy or search-tree solvers.
//!
//! The size oracle only needs maximal cliques: growing a clique never costs
//! an extra clique. The weight oracle must consider every clique, since a
//! smaller clique can be cheaper.

use thiserror::Error;

use crate::cover::Clique;
use crate::graph::{Graph, Vertex};

pub const SIZE_LIMIT: usize = 12;
pub const WEIGHT_LIMIT: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle is capped at {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Smallest number of cliques, from [`exact_minimum_size`].
    pub min_size: Option<usize>,
    /// Smallest Σ|C_l|, from [`exact_minimum_weight`].
    pub min_weight: Option<usize>,
    pub witness: Vec<Clique>,
}

struct Instance {
    n: usize,
    adj: Vec<u32>,
    edge_bit: Vec<Vec<Option<u32>>>,
    m: usize,
}

impl Instance {
    fn new(g: &Graph, limit: usize) -> Result<Self, OracleError> {
        let n = g.vertex_count();
        if n > limit || n > 16 {
            return Err(OracleError::TooLarge { n, limit });
        }
        let mut adj = vec![0u32; n];
        let mut edge_bit = vec![vec![None; n]; n];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            edge_bit[u][v] = Some(i as u32);
            edge_bit[v][u] = Some(i as u32);
        }
        Ok(Instance {
            n,
            adj,
            edge_bit,
            m: g.edge_count(),
        })
    }

    fn is_clique(&self, mask: u32) -> bool {
        (0..self.n)
            .filter(|&v| mask >> v & 1 == 1)
            .all(|v| mask & !(1 << v) & !self.adj[v] == 0)
    }

    fn is_maximal(&self, mask: u32) -> bool {
        (0..self.n).all(|v| mask >> v & 1 == 1 || mask & !self.adj[v] != 0)
    }

    fn edge_mask(&self, mask: u32) -> u128 {
        let mut out = 0u128;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                    out |= 1u128 << self.edge_bit[u][v].expect("clique pair");
                }
            }
        }
        out
    }

    /// Cliques with at least two vertices, optionally only maximal ones.
    fn cliques(&self, maximal_only: bool) -> Vec<u32> {
        (1u32..(1 << self.n))
            .filter(|&mask| mask.count_ones() >= 2 && self.is_clique(mask))
            .filter(|&mask| !maximal_only || self.is_maximal(mask))
            .collect()
    }

    fn all_edges(&self) -> u128 {
        if self.m == 128 {
            u128::MAX
        } else {
            (1u128 << self.m) - 1
        }
    }
}

fn to_cliques(masks: &[u32]) -> Vec<Clique> {
    masks
        .iter()
        .map(|&mask| {
            Clique::new(
                (0..32)
                    .filter(|&v| mask >> v & 1 == 1)
                    .map(|v| v as Vertex)
                    .collect(),
            )
        })
        .collect()
}

struct SetCover<'a> {
    covers: &'a [u128],
    cost: &'a [usize],
    by_edge: Vec<Vec<usize>>,
    lower_bound: &'a dyn Fn(u128) -> usize,
    chosen: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
}

impl SetCover<'_> {
    fn search(&mut self, uncovered: u128, spent: usize) {
        if uncovered == 0 {
            if self.best.as_ref().is_none_or(|(b, _)| spent < *b) {
                self.best = Some((spent, self.chosen.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            if spent + (self.lower_bound)(uncovered) >= *b {
                return;
            }
        }
        let edge = (0..128)
            .filter(|&e| uncovered >> e & 1 == 1)
            .min_by_key(|&e| self.by_edge[e].len())
            .expect("uncovered is nonzero");
        for i in 0..self.by_edge[edge].len() {
            let s = self.by_edge[edge][i];
            self.chosen.push(s);
            self.search(uncovered & !self.covers[s], spent + self.cost[s]);
            self.chosen.pop();
        }
    }
}

fn solve(
    inst: &Instance,
    masks: &[u32],
    cost: &[usize],
    lower_bound: &dyn Fn(u128) -> usize,
) -> (usize, Vec<Clique>) {
    let covers: Vec<u128> = masks.iter().map(|&c| inst.edge_mask(c)).collect();
    let mut by_edge = vec![Vec::new(); inst.m];
    for (s, &cov) in covers.iter().enumerate() {
        for (e, list) in by_edge.iter_mut().enumerate() {
            if cov >> e & 1 == 1 {
                list.push(s);
            }
        }
    }
    // try the cheapest-per-edge sets first so good incumbents appear early
    for list in &mut by_edge {
        list.sort_by(|&a, &b| {
            (cost[a] * covers[b].count_ones() as usize)
                .cmp(&(cost[b] * covers[a].count_ones() as usize))
                .then(a.cmp(&b))
        });
    }
    let mut sc = SetCover {
        covers: &covers,
        cost,
        by_edge,
        lower_bound,
        chosen: Vec::new(),
        best: None,
    };
    sc.search(inst.all_edges(), 0);
    let (value, chosen) = sc.best.expect("single edges always cover");
    let picked: Vec<u32> = chosen.iter().map(|&s| masks[s]).collect();
    (value, to_cliques(&picked))
}

/// Minimum number of cliques covering every edge. `limit` caps `n`.
pub fn exact_minimum_size(g: &Graph, limit: usize) -> Result<OracleResult, OracleError> {
    let inst = Instance::new(g, limit)?;
    let masks = inst.cliques(true);
    let cost = vec![1; masks.len()];
    let (value, witness) = solve(&inst, &masks, &cost, &|u| usize::from(u != 0));
    Ok(OracleResult {
        min_size: Some(value),
        min_weight: None,
        witness,
    })
}

/// Minimum Σ|C_l| over all clique covers. `limit` caps `n`.
///
/// Bound: a clique of `s` vertices covers at most `s(s-1)/2` edges, so each
/// uncovered edge costs at least `2 / (ω - 1)` vertex slots.
pub fn exact_minimum_weight(g: &Graph, limit: usize) -> Result<OracleResult, OracleError> {
    let inst = Instance::new(g, limit)?;
    let masks = inst.cliques(false);
    let cost: Vec<usize> = masks.iter().map(|c| c.count_ones() as usize).collect();
    let omega = cost.iter().copied().max().unwrap_or(2);
    let bound = move |u: u128| (2 * u.count_ones() as usize).div_ceil(omega - 1);
    let (value, witness) = solve(&inst, &masks, &cost, &bound);
    Ok(OracleResult {
        min_size: None,
        min_weight: Some(value),
        witness,
    })
}
