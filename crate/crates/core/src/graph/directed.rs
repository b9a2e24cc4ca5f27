use crate::error::{DsdError, Result};

use super::{membership, InducedSubgraph};

/// Simple directed graph: no repeated arcs, no self-loops.
///
/// Arcs are kept sorted lexicographically; `out_adj` and `in_adj` are
/// mutual transposes with sorted lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    /// Builds a digraph on `n` vertices, dropping self-loops and repeated arcs.
    pub fn from_edges<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(DsdError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                list.push((u, v));
            }
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_canonical(n, list))
    }

    pub(crate) fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        // `edges` is sorted by (u, v) so out lists are already sorted and in
        // lists receive tails in ascending order.
        Self { out_adj, in_adj, edges }
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        self.in_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Same vertex set with every arc reversed.
    pub fn transpose(&self) -> DirectedGraph {
        DirectedGraph::from_edges(self.n(), self.edges.iter().map(|&(u, v)| (v, u)))
            .expect("transpose keeps vertex range")
    }

    /// |E ∩ (S × T)|.
    pub fn arcs_between(&self, s: &[usize], t: &[usize]) -> Result<usize> {
        let ms = membership(self.n(), s)?;
        let mt = membership(self.n(), t)?;
        Ok(self.count_between(&ms, &mt))
    }

    pub(crate) fn count_between(&self, ms: &[bool], mt: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| ms[u] && mt[v]).count()
    }

    /// Directed density |E(S,T)| / sqrt(|S||T|). S and T may overlap.
    pub fn density(&self, s: &[usize], t: &[usize]) -> Result<f64> {
        let ms = membership(self.n(), s)?;
        let mt = membership(self.n(), t)?;
        let ns = ms.iter().filter(|&&b| b).count();
        let nt = mt.iter().filter(|&&b| b).count();
        if ns == 0 || nt == 0 {
            return Err(DsdError::EmptyVertexSet);
        }
        Ok(directed_density(self.count_between(&ms, &mt), ns, nt))
    }

    /// c-biased density: the directed density scaled by
    /// `2 sqrt(c) sqrt(c') / (c + c')` where `c' = |S| / |T|`.
    pub fn c_biased_density(&self, s: &[usize], t: &[usize], c: f64) -> Result<f64> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(DsdError::InvalidParameter(format!("ratio c must be positive, got {c}")));
        }
        let rho = self.density(s, t)?;
        let ns = membership(self.n(), s)?.iter().filter(|&&b| b).count();
        let nt = membership(self.n(), t)?.iter().filter(|&&b| b).count();
        Ok(ratio_prefactor(c, ns as f64 / nt as f64) * rho)
    }

    /// The (S,T)-induced subgraph: vertex set S ∪ T (ascending parent id),
    /// arcs exactly E(S,T).
    pub fn induced_pair_subgraph(&self, s: &[usize], t: &[usize]) -> Result<InducedSubgraph<DirectedGraph>> {
        let ms = membership(self.n(), s)?;
        let mt = membership(self.n(), t)?;
        Ok(self.induced_by_masks(&ms, &mt))
    }

    pub(crate) fn induced_by_masks(&self, ms: &[bool], mt: &[bool]) -> InducedSubgraph<DirectedGraph> {
        let mut local = vec![usize::MAX; self.n()];
        let mut to_parent = Vec::new();
        for v in 0..self.n() {
            if ms[v] || mt[v] {
                local[v] = to_parent.len();
                to_parent.push(v);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| ms[u] && mt[v])
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        InducedSubgraph {
            graph: DirectedGraph::from_canonical(to_parent.len(), edges),
            to_parent,
        }
    }

    /// Canonical arc-list text, one `u v` line per arc in sorted order.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(self.m() * 8);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// |E| / sqrt(|S| |T|).
pub fn directed_density(arcs: usize, s: usize, t: usize) -> f64 {
    arcs as f64 / ((s as f64) * (t as f64)).sqrt()
}

/// `2 sqrt(c) sqrt(c') / (c + c')`; at most 1, equal to 1 iff `c == c'`.
pub fn ratio_prefactor(c: f64, c_prime: f64) -> f64 {
    2.0 * (c * c_prime).sqrt() / (c + c_prime)
}
