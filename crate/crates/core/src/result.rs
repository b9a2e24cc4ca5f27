use std::time::Duration;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{DirectedGraph, UndirectedGraph};

/// Lower and upper bounds on the optimal density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityBounds {
    pub lower: f64,
    pub upper: f64,
}

impl DensityBounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    /// Solver iterations: binary-search probes for flow methods, weight
    /// updates for CP methods, peeling rounds for greedy methods.
    pub iterations: u64,
    /// Number of graph reductions that actually shrank the working graph.
    pub reductions: usize,
    /// DDS only: number of ratios `c` for which a per-ratio problem was solved.
    pub ratios_probed: usize,
    #[serde(skip)]
    pub elapsed: Duration,
    /// Edge count of the working graph, recorded at start and after every
    /// reduction.
    pub edge_trace: Vec<usize>,
}

/// A densest-subgraph answer. `t` is `None` for undirected problems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DsResult {
    pub s: Vec<usize>,
    pub t: Option<Vec<usize>>,
    pub density: f64,
    /// `|S| / |T|` for directed answers.
    pub ratio: Option<f64>,
    /// Exact algorithms: optimality was certified. Approximation
    /// algorithms: the stated guarantee was certified.
    pub verified: bool,
    pub stats: RunStats,
}

impl DsResult {
    /// Builds a result for vertex set `s` of `g`, recomputing the density.
    pub fn undirected(g: &UndirectedGraph, mut s: Vec<usize>) -> Result<Self> {
        s.sort_unstable();
        s.dedup();
        let density = g.density_of(&s)?;
        Ok(Self {
            s,
            t: None,
            density,
            ratio: None,
            verified: false,
            stats: RunStats::default(),
        })
    }

    pub fn directed(d: &DirectedGraph, mut s: Vec<usize>, mut t: Vec<usize>) -> Result<Self> {
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        let density = d.density(&s, &t)?;
        let ratio = Some(s.len() as f64 / t.len() as f64);
        Ok(Self {
            s,
            t: Some(t),
            density,
            ratio,
            verified: false,
            stats: RunStats::default(),
        })
    }

    pub fn s_size(&self) -> usize {
        self.s.len()
    }

    pub fn t_size(&self) -> usize {
        self.t.as_ref().map_or(0, Vec::len)
    }
}
