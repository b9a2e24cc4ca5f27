//! Graph containers, the edge-list loader and density helpers.

mod directed;
mod io;
mod undirected;

pub use directed::{directed_density, ratio_prefactor, DirectedGraph};
pub use io::{load_edge_list, parse_directed, parse_undirected, read_directed, read_undirected, AnyGraph, Loaded};
pub use undirected::UndirectedGraph;

use crate::error::{DsdError, Result};

/// A subgraph together with the map from its local ids back to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph<G> {
    pub graph: G,
    /// `to_parent[local] = parent id`, strictly increasing.
    pub to_parent: Vec<usize>,
}

impl<G> InducedSubgraph<G> {
    /// Translates local ids to parent ids, sorted.
    pub fn lift(&self, local: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = local.iter().map(|&v| self.to_parent[v]).collect();
        out.sort_unstable();
        out
    }
}

pub(crate) fn membership(n: usize, set: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(DsdError::VertexOutOfRange { vertex: v, n });
        }
        mask[v] = true;
    }
    Ok(mask)
}

pub(crate) fn mask_to_set(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter_map(|(v, &b)| b.then_some(v)).collect()
}
