//! Per-run instrumentation records and their CSV form.

use serde::Serialize;

/// One CSV row describing a single solver run on one graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub d: Option<usize>,
    pub delta: usize,
    pub algorithm: String,
    pub policy: String,
    pub status: String,
    pub cover_size: Option<usize>,
    pub cover_size_nontrivial: Option<usize>,
    pub weight: Option<usize>,
    /// Peak of Σ|S_x| over the run.
    pub ccs_max: Option<usize>,
    /// Total size of the candidate-set intersections at the absorption test.
    pub ccs_tsi: Option<usize>,
    pub nodes: Option<u64>,
    pub max_depth: Option<usize>,
    pub max_branches: Option<usize>,
    /// `branches:count` pairs of the search tree.
    pub branch_histogram: String,
    /// Budget of the successful decision run.
    pub k: Option<usize>,
    pub wall_ms: f64,
    pub seed: Option<u64>,
}

impl RunStats {
    pub fn csv_header() -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(true)
            .from_writer(Vec::new());
        w.serialize(RunStats::default()).expect("in-memory write");
        let bytes = w.into_inner().expect("in-memory write");
        String::from_utf8(bytes)
            .expect("utf8")
            .lines()
            .next()
            .unwrap_or_default()
            .to_string()
    }

    /// The row as CSV text without header or trailing newline.
    pub fn to_csv_row(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.serialize(self).expect("in-memory write");
        let bytes = w.into_inner().expect("in-memory write");
        String::from_utf8(bytes)
            .expect("utf8")
            .trim_end()
            .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_row_align() {
        let header = RunStats::csv_header();
        assert!(header.starts_with("graph,n,m,d,delta,algorithm,policy,status,cover_size"));
        let row = RunStats {
            graph: "g6".into(),
            n: 6,
            m: 10,
            d: Some(3),
            wall_ms: 0.5,
            ..Default::default()
        }
        .to_csv_row();
        assert_eq!(header.split(',').count(), row.split(',').count());
        assert!(row.starts_with("g6,6,10,3,0,"));
    }
}
