//! k-cores of undirected graphs and [x,y]-cores of directed graphs.

use std::collections::VecDeque;

use crate::error::{DsdError, Result};
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::result::DensityBounds;

/// Slack subtracted before taking a ceiling so that a bound which is an
/// integer up to rounding noise does not jump to the next core.
const CEIL_SLACK: f64 = 1e-9;

pub(crate) fn ceil_threshold(x: f64) -> usize {
    if x <= 0.0 {
        0
    } else {
        (x - CEIL_SLACK).ceil().max(0.0) as usize
    }
}

/// Every vertex of an inclusion-minimal densest subgraph has inner degree
/// strictly above `ρ*`, so for any exact lower bound `x ≤ ρ*` the
/// `(⌊x⌋ + 1)`-core still holds a densest subgraph. `x` must be exact (a
/// dyadic guess or a density with a small denominator).
pub(crate) fn strict_threshold(x: f64) -> usize {
    if x < 0.0 {
        0
    } else {
        x.floor() as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreDecomposition {
    pub core_number: Vec<usize>,
    pub k_star: usize,
}

impl CoreDecomposition {
    /// Vertices with core number at least `k`, ascending.
    pub fn k_core(&self, k: usize) -> Vec<usize> {
        (0..self.core_number.len())
            .filter(|&v| self.core_number[v] >= k)
            .collect()
    }
}

/// Bucket-based O(n + m) core decomposition.
pub fn core_numbers(g: &UndirectedGraph) -> CoreDecomposition {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = first position of degree-d vertices in `vert`.
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    let mut next = bin.clone();
    for v in 0..n {
        pos[v] = next[deg[v]];
        vert[pos[v]] = v;
        next[deg[v]] += 1;
    }

    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    let k_star = deg.iter().copied().max().unwrap_or(0);
    CoreDecomposition {
        core_number: deg,
        k_star,
    }
}

pub fn k_core(g: &UndirectedGraph, k: usize) -> Vec<usize> {
    core_numbers(g).k_core(k)
}

/// The ⌈lower_bound⌉-core, which contains every densest subgraph whenever
/// `lower_bound` does not exceed the optimal density.
pub fn reduce_uds(g: &UndirectedGraph, lower_bound: f64) -> Vec<usize> {
    reduce_uds_with(&core_numbers(g), lower_bound)
}

pub fn reduce_uds_with(cores: &CoreDecomposition, lower_bound: f64) -> Vec<usize> {
    cores.k_core(ceil_threshold(lower_bound))
}

/// `(k*/2, k*)`, valid bounds on the optimal density.
pub fn initial_bounds(g: &UndirectedGraph) -> Result<DensityBounds> {
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let k = core_numbers(g).k_star as f64;
    Ok(DensityBounds {
        lower: k / 2.0,
        upper: k,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XyCore {
    pub x: usize,
    pub y: usize,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl XyCore {
    pub fn is_empty(&self) -> bool {
        self.s.is_empty() || self.t.is_empty()
    }
}

/// The maximal pair (S, T) in which every `u ∈ S` has at least `x`
/// out-neighbours in `T` and every `v ∈ T` at least `y` in-neighbours in `S`.
pub fn xy_core(d: &DirectedGraph, x: usize, y: usize) -> XyCore {
    let (in_s, in_t) = xy_core_masks(d, x, y);
    XyCore {
        x,
        y,
        s: (0..d.n()).filter(|&v| in_s[v]).collect(),
        t: (0..d.n()).filter(|&v| in_t[v]).collect(),
    }
}

fn xy_core_masks(d: &DirectedGraph, x: usize, y: usize) -> (Vec<bool>, Vec<bool>) {
    let n = d.n();
    let mut in_s = vec![true; n];
    let mut in_t = vec![true; n];
    let mut out_deg: Vec<usize> = (0..n).map(|v| d.out_degree(v)).collect();
    let mut in_deg: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();

    // Queue entries: (vertex, is_s_side).
    let mut queue = VecDeque::new();
    for v in 0..n {
        if out_deg[v] < x {
            in_s[v] = false;
            queue.push_back((v, true));
        }
        if in_deg[v] < y {
            in_t[v] = false;
            queue.push_back((v, false));
        }
    }
    while let Some((v, s_side)) = queue.pop_front() {
        if s_side {
            for &w in d.out_neighbors(v) {
                if in_t[w] {
                    in_deg[w] -= 1;
                    if in_deg[w] < y {
                        in_t[w] = false;
                        queue.push_back((w, false));
                    }
                }
            }
        } else {
            for &u in d.in_neighbors(v) {
                if in_s[u] {
                    out_deg[u] -= 1;
                    if out_deg[u] < x {
                        in_s[u] = false;
                        queue.push_back((u, true));
                    }
                }
            }
        }
    }
    (in_s, in_t)
}

fn xy_nonempty(d: &DirectedGraph, x: usize, y: usize) -> bool {
    let (s, t) = xy_core_masks(d, x, y);
    s.iter().any(|&b| b) && t.iter().any(|&b| b)
}

/// The non-empty [x, y]-core maximising `x * y` over `x, y ≥ 1`; ties go to
/// the larger `x`.
pub fn xy_core_max_product(d: &DirectedGraph) -> Result<XyCore> {
    if d.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let mut best = (0usize, 1usize, 1usize);
    // The largest feasible y can only shrink as x grows.
    let mut y_hi = d.max_in_degree();
    for x in 1..=d.max_out_degree() {
        if !xy_nonempty(d, x, 1) {
            break;
        }
        let (mut lo, mut hi) = (1, y_hi);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if xy_nonempty(d, x, mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        y_hi = lo;
        if x * lo >= best.0 {
            best = (x * lo, x, lo);
        }
    }
    Ok(xy_core(d, best.1, best.2))
}

/// The [⌈ρ/(2√c_r)⌉, ⌈√c_l·ρ/2⌉]-core. It contains every densest (S, T)
/// pair whose ratio `|S|/|T|` lies in `[c_l, c_r]`, provided `lower_bound`
/// does not exceed the optimum.
pub fn reduce_dds(d: &DirectedGraph, lower_bound: f64, c_l: f64, c_r: f64) -> Result<XyCore> {
    if !(c_l > 0.0 && c_l <= c_r) || lower_bound < 0.0 {
        return Err(DsdError::InvalidParameter(format!(
            "reduce_dds needs 0 < c_l <= c_r and lower_bound >= 0 (got {c_l}, {c_r}, {lower_bound})"
        )));
    }
    let x = ceil_threshold(lower_bound / (2.0 * c_r.sqrt()));
    let y = ceil_threshold(c_l.sqrt() * lower_bound / 2.0);
    Ok(xy_core(d, x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle_pendant() -> UndirectedGraph {
        UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    fn complete(n: usize) -> UndirectedGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        UndirectedGraph::from_edges(n, edges).unwrap()
    }

    /// Repeatedly delete a minimum-degree vertex; the core number of a
    /// vertex is the running maximum of the degrees seen at deletion.
    fn naive_cores(g: &UndirectedGraph) -> Vec<usize> {
        let n = g.n();
        let mut alive = vec![true; n];
        let mut core = vec![0; n];
        let mut k = 0;
        for _ in 0..n {
            let deg = |v: usize, alive: &[bool]| g.neighbors(v).iter().filter(|&&u| alive[u]).count();
            let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| deg(v, &alive)).unwrap();
            k = k.max(deg(v, &alive));
            core[v] = k;
            alive[v] = false;
        }
        core
    }

    #[test]
    fn core_examples() {
        let c = core_numbers(&triangle_pendant());
        assert_eq!(c.core_number, vec![2, 2, 2, 1]);
        assert_eq!(c.k_star, 2);
        assert_eq!(core_numbers(&complete(5)).core_number, vec![4; 5]);
        let empty = UndirectedGraph::from_edges(3, []).unwrap();
        assert_eq!(core_numbers(&empty).core_number, vec![0; 3]);
    }

    #[test]
    fn k_core_examples() {
        assert_eq!(k_core(&triangle_pendant(), 2), vec![0, 1, 2]);
        assert_eq!(k_core(&triangle_pendant(), 0), vec![0, 1, 2, 3]);
        assert!(k_core(&complete(5), 5).is_empty());
    }

    #[test]
    fn reduce_uds_examples() {
        let g = triangle_pendant();
        assert_eq!(reduce_uds(&g, 1.0), vec![0, 1, 2, 3]);
        assert_eq!(reduce_uds(&g, 1.01), vec![0, 1, 2]);
        assert_eq!(reduce_uds(&g, 0.0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn initial_bounds_examples() {
        let b = initial_bounds(&complete(4)).unwrap();
        assert_eq!((b.lower, b.upper), (1.5, 3.0));
        let b = initial_bounds(&triangle_pendant()).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 2.0));
        let b = initial_bounds(&complete(2)).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 1.0));
        assert!(initial_bounds(&UndirectedGraph::from_edges(2, []).unwrap()).is_err());
    }

    fn cycle3() -> DirectedGraph {
        DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn complete_digraph(n: usize) -> DirectedGraph {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        DirectedGraph::from_edges(n, arcs).unwrap()
    }

    #[test]
    fn xy_core_examples() {
        let c = xy_core(&cycle3(), 1, 1);
        assert_eq!((c.s.clone(), c.t.clone()), (vec![0, 1, 2], vec![0, 1, 2]));
        assert!(xy_core(&cycle3(), 2, 1).is_empty());
        let c = xy_core(&cycle3(), 0, 0);
        assert_eq!(c.s.len() + c.t.len(), 6);
    }

    #[test]
    fn max_product_examples() {
        let c = xy_core_max_product(&cycle3()).unwrap();
        assert_eq!((c.x, c.y), (1, 1));
        let c = xy_core_max_product(&complete_digraph(3)).unwrap();
        assert_eq!((c.x, c.y), (2, 2));
        assert_eq!(c.s, vec![0, 1, 2]);
        let arc = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let c = xy_core_max_product(&arc).unwrap();
        assert_eq!((c.s, c.t), (vec![0], vec![1]));
        let star = DirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let c = xy_core_max_product(&star).unwrap();
        assert_eq!((c.x, c.y), (4, 1));
    }

    #[test]
    fn reduce_dds_examples() {
        let two = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let c = reduce_dds(&two, 0.0, 0.5, 2.0).unwrap();
        assert_eq!((c.x, c.y), (0, 0));
        let c = reduce_dds(&two, 1.0, 1.0, 1.0).unwrap();
        assert_eq!((c.x, c.y, c.s, c.t), (1, 1, vec![0, 1], vec![0, 1]));
        let c = reduce_dds(&two, 1.0, 4.0, 4.0).unwrap();
        assert_eq!((c.x, c.y), (1, 1));
        assert!(reduce_dds(&two, 1.0, 2.0, 1.0).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = UndirectedGraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(n * n / 2 + 1))
                .prop_map(move |e| UndirectedGraph::from_edges(n, e).unwrap())
        })
    }

    fn arb_digraph(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(n * n))
                .prop_map(move |e| DirectedGraph::from_edges(n, e).unwrap())
        })
    }

    /// Peels in a random order until nothing violates the thresholds.
    fn xy_core_random_order(d: &DirectedGraph, x: usize, y: usize, seed: u64) -> (Vec<bool>, Vec<bool>) {
        let n = d.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = vec![true; n];
        let mut t = vec![true; n];
        loop {
            let mut bad: Vec<(usize, bool)> = Vec::new();
            for v in 0..n {
                if s[v] && d.out_neighbors(v).iter().filter(|&&w| t[w]).count() < x {
                    bad.push((v, true));
                }
                if t[v] && d.in_neighbors(v).iter().filter(|&&u| s[u]).count() < y {
                    bad.push((v, false));
                }
            }
            let Some(&(v, side)) = bad.choose(&mut rng) else {
                return (s, t);
            };
            if side {
                s[v] = false;
            } else {
                t[v] = false;
            }
        }
    }

    proptest! {
        #[test]
        fn core_numbers_match_naive(g in arb_graph(50)) {
            prop_assert_eq!(core_numbers(&g).core_number, naive_cores(&g));
        }

        #[test]
        fn cores_are_nested(g in arb_graph(30)) {
            let c = core_numbers(&g);
            for k in 0..=c.k_star {
                let outer = c.k_core(k);
                let inner = c.k_core(k + 1);
                prop_assert!(inner.iter().all(|v| outer.contains(v)));
                let sub = g.induced_subgraph(&outer).unwrap();
                for v in 0..sub.graph.n() {
                    prop_assert!(sub.graph.degree(v) >= k);
                }
            }
        }

        #[test]
        fn xy_core_is_order_independent(d in arb_digraph(12), x in 0usize..4, y in 0usize..4, seed in any::<u64>()) {
            let core = xy_core(&d, x, y);
            let (s, t) = xy_core_random_order(&d, x, y, seed);
            prop_assert_eq!(core.s, (0..d.n()).filter(|&v| s[v]).collect::<Vec<_>>());
            prop_assert_eq!(core.t, (0..d.n()).filter(|&v| t[v]).collect::<Vec<_>>());
        }
    }
}
