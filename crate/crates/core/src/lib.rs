//! Edge clique cover solvers: greedy heuristics and parameterized search
//! trees over degeneracy orderings, with brute-force oracles for checking.

pub mod cover;
pub mod fixtures;
pub mod fpt;
pub mod graph;
pub mod greedy;
pub mod harness;
pub mod mce;
pub mod oracle;
pub mod stats;
