use std::collections::VecDeque;

use crate::error::{DsdError, Result};

use super::{membership, InducedSubgraph};

/// Simple undirected graph with sorted adjacency lists.
///
/// Vertices are dense indices `0..n`. Edges are stored once, canonically as
/// `(u, v)` with `u < v`, sorted lexicographically; the position of an edge
/// in [`UndirectedGraph::edges`] is its edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    /// Builds a graph on `n` vertices. Self-loops and repeated edges are
    /// dropped; endpoints must be `< n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(DsdError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                list.push((u.min(v), u.max(v)));
            }
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_canonical(n, list))
    }

    /// `edges` must be sorted, deduplicated and satisfy `u < v < n`.
    pub(crate) fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { adj, edges }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge density |E| / |V|.
    pub fn density(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.m() as f64 / self.n() as f64
        }
    }

    /// Number of edges with both endpoints in `set`.
    pub fn edges_within(&self, set: &[usize]) -> Result<usize> {
        let mask = membership(self.n(), set)?;
        Ok(self.count_inside(&mask))
    }

    pub(crate) fn count_inside(&self, mask: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| mask[u] && mask[v]).count()
    }

    /// Density of the subgraph induced by `set`.
    pub fn density_of(&self, set: &[usize]) -> Result<f64> {
        let mask = membership(self.n(), set)?;
        let k = mask.iter().filter(|&&b| b).count();
        if k == 0 {
            return Err(DsdError::EmptyVertexSet);
        }
        Ok(self.count_inside(&mask) as f64 / k as f64)
    }

    /// Subgraph induced by `set`; local ids follow ascending parent id.
    pub fn induced_subgraph(&self, set: &[usize]) -> Result<InducedSubgraph<UndirectedGraph>> {
        let mask = membership(self.n(), set)?;
        Ok(self.induced_by_mask(&mask))
    }

    pub(crate) fn induced_by_mask(&self, mask: &[bool]) -> InducedSubgraph<UndirectedGraph> {
        let mut local = vec![usize::MAX; self.n()];
        let mut to_parent = Vec::new();
        for (v, &keep) in mask.iter().enumerate() {
            if keep {
                local[v] = to_parent.len();
                to_parent.push(v);
            }
        }
        // Parent edges are sorted and the relabeling is monotone, so the
        // filtered list stays canonical.
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| mask[u] && mask[v])
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        InducedSubgraph {
            graph: UndirectedGraph::from_canonical(to_parent.len(), edges),
            to_parent,
        }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Canonical edge-list text: one `u v` line per edge, `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(self.m() * 8);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_pendant() -> UndirectedGraph {
        UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn density_examples() {
        let k4 = UndirectedGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.density(), 1.5);
        let e = UndirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(e.density(), 0.5);
        assert_eq!(triangle_pendant().density(), 1.0);
    }

    #[test]
    fn adjacency_is_symmetric_and_degrees_sum() {
        let g = triangle_pendant();
        let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.m());
        for v in 0..g.n() {
            for &u in g.neighbors(v) {
                assert!(g.neighbors(u).contains(&v));
            }
        }
    }

    #[test]
    fn drops_loops_and_duplicates() {
        let g = UndirectedGraph::from_edges(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.m(), 1);
        assert!(matches!(
            UndirectedGraph::from_edges(2, [(0, 5)]),
            Err(DsdError::VertexOutOfRange { vertex: 5, n: 2 })
        ));
    }

    #[test]
    fn induced_examples() {
        let k4 = UndirectedGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let tri = k4.induced_subgraph(&[3, 1, 2]).unwrap();
        assert_eq!(tri.graph.n(), 3);
        assert_eq!(tri.graph.m(), 3);
        assert_eq!(tri.to_parent, vec![1, 2, 3]);

        let path = UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let ends = path.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!((ends.graph.n(), ends.graph.m()), (2, 0));

        assert!(path.induced_subgraph(&[7]).is_err());
    }

    #[test]
    fn component_examples() {
        let two = UndirectedGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(two.connected_components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);

        let path = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(path.connected_components().len(), 1);

        let iso = UndirectedGraph::from_edges(3, [(1, 2)]).unwrap();
        assert_eq!(iso.connected_components(), vec![vec![0], vec![1, 2]]);
    }
}
