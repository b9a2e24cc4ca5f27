//! Candidate extraction from vertex weights, density upper bounds and the
//! stop/optimality checks used by the iterative solvers.

use std::cmp::Ordering;

use crate::cp::{DdsState, UdsState};
use crate::error::{DsdError, Result};
use crate::exact::{cmp_directed, gap_clearly_below};
use crate::flow::denser_than;
use crate::graph::{membership, DirectedGraph, UndirectedGraph};
use crate::result::DensityBounds;

/// Float slack for comparisons involving accumulated weights.
const WEIGHT_TOL: f64 = 1e-9;

/// Vertices by weight descending, ties by smaller id.
pub(crate) fn weight_order(w: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    order
}

/// Best prefix of the weight order: `(prefix length, edges inside)`.
fn best_prefix(g: &UndirectedGraph, order: &[usize]) -> (usize, u64) {
    let mut rank = vec![usize::MAX; g.n()];
    let mut edges = 0u64;
    let mut best = (0usize, 0u64);
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
        edges += g.neighbors(v).iter().filter(|&&u| rank[u] < i).count() as u64;
        let k = i + 1;
        // Strictly better only, so ties keep the shorter prefix.
        if best.0 == 0 || (edges as u128) * (best.0 as u128) > (best.1 as u128) * (k as u128) {
            best = (k, edges);
        }
    }
    best
}

/// The densest prefix of vertices sorted by weight (ties: smaller id, then
/// shorter prefix). Returned ascending.
pub fn pava_extract(g: &UndirectedGraph, w: &[f64]) -> Result<Vec<usize>> {
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    if w.len() != g.n() {
        return Err(DsdError::InvalidParameter(format!(
            "weight vector has {} entries for {} vertices",
            w.len(),
            g.n()
        )));
    }
    let order = weight_order(w);
    let (k, _) = best_prefix(g, &order);
    let mut set = order[..k].to_vec();
    set.sort_unstable();
    Ok(set)
}

/// `max_i min{ C(i,2)/i, (1/i) Σ_{j ≤ i} w(u_j) }` over the weight order.
pub fn density_upper_bound(g: &UndirectedGraph, w: &[f64]) -> f64 {
    debug_assert_eq!(w.len(), g.n());
    let order = weight_order(w);
    let mut prefix = 0.0;
    let mut best = 0.0f64;
    for (idx, &v) in order.iter().enumerate() {
        let i = (idx + 1) as f64;
        prefix += w[v];
        best = best.max(((i - 1.0) / 2.0).min(prefix / i));
    }
    best
}

/// Same bound, using that an `i`-vertex subgraph has an integral number of
/// edges: `max_i min{ C(i,2), ⌊Σ_{j ≤ i} w(u_j)⌋ } / i`.
pub fn integral_upper_bound(w: &[f64]) -> f64 {
    let order = weight_order(w);
    let mut prefix = 0.0;
    let mut best = 0.0f64;
    for (idx, &v) in order.iter().enumerate() {
        let i = (idx + 1) as f64;
        prefix += w[v];
        let pairs = i * (i - 1.0) / 2.0;
        best = best.max(pairs.min((prefix + WEIGHT_TOL).floor()) / i);
    }
    best
}

/// Literal stable-set test: every weight inside `S` exceeds every weight
/// outside, and no edge leaving `S` sends any share into `S`.
pub fn is_stable_set(g: &UndirectedGraph, s: &[usize], state: &UdsState) -> Result<bool> {
    let inside = membership(g.n(), s)?;
    if s.is_empty() {
        return Err(DsdError::EmptyVertexSet);
    }
    let min_in = (0..g.n())
        .filter(|&v| inside[v])
        .map(|v| state.w[v])
        .fold(f64::INFINITY, f64::min);
    let max_out = (0..g.n())
        .filter(|&v| !inside[v])
        .map(|v| state.w[v])
        .fold(f64::NEG_INFINITY, f64::max);
    if !(min_in > max_out) {
        return Ok(false);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if inside[u] != inside[v] {
            let into_s = if inside[u] {
                state.share[e]
            } else {
                1.0 - state.share[e]
            };
            if into_s != 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Improved Goldberg condition for `S` with weights `w` (indexed by vertex
/// of `g`, only entries of `S` are read). True certifies that no subgraph
/// of `g[S]` is denser than `S` itself.
///
/// For every `i < |S|` with `n = |S|`, `m = |E(S)|`:
/// `min{C(i,2), W_i}/i − m/n < max{1/(n i), (⌈im/n⌉ − im/n)/i}`,
/// evaluated after multiplying through by `n i`.
pub fn goldberg_condition(g: &UndirectedGraph, s: &[usize], w: &[f64]) -> Result<bool> {
    if s.is_empty() {
        return Err(DsdError::EmptyVertexSet);
    }
    let n = s.len() as i128;
    let m = g.edges_within(s)? as i128;
    let mut ws: Vec<f64> = s.iter().map(|&v| w[v]).collect();
    ws.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut prefix = 0.0;
    for i in 1..n {
        prefix += ws[(i - 1) as usize];
        let pairs_n = (i * (i - 1) / 2 * n) as f64;
        let lhs = pairs_n.min(n as f64 * prefix) - (i * m) as f64;
        let im = i * m;
        let ceil = (im + n - 1) / n;
        let rhs = (n * ceil - im).max(1) as f64;
        if !(lhs < rhs - WEIGHT_TOL * (1.0 + rhs.abs())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weights after sending every edge between `S` and the rest entirely to
/// the outside endpoint. The result is again a feasible weight vector.
fn rerouted_weights(g: &UndirectedGraph, inside: &[bool], state: &UdsState) -> Vec<f64> {
    let mut w = state.w.clone();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if inside[u] != inside[v] {
            let (a, b) = (state.share[e], 1.0 - state.share[e]);
            let (s_end, o_end, s_part) = if inside[u] { (u, v, a) } else { (v, u, b) };
            w[s_end] -= s_part;
            w[o_end] += s_part;
        }
    }
    w
}

/// Optimality certificate for a CP candidate `S`.
///
/// Shares of edges leaving `S` are first moved outside. If then every weight
/// in `S` is at least every weight outside, all densest subgraphs lie in
/// `S`; `S` is optimal when additionally nothing inside `g[S]` beats it,
/// shown by the Goldberg condition or, failing that, by an exact max-flow on
/// `g[S]` at `g = m_S / n_S` (saturation value `n_S · m_S` in units of
/// `1/n_S`).
pub fn verify_exact_cp(g: &UndirectedGraph, s: &[usize], state: &UdsState) -> Result<bool> {
    if s.is_empty() {
        return Err(DsdError::EmptyVertexSet);
    }
    let inside = membership(g.n(), s)?;
    if s.len() == g.n() {
        return verify_inside(g, s, &state.w);
    }
    match contains_all_densest(g, &inside, state) {
        Some(w) => verify_inside(g, s, &w),
        None => Ok(false),
    }
}

/// Shares of edges leaving `S` are moved outside; if every resulting weight
/// in `S` is at least every weight outside, all densest subgraphs lie in
/// `S` and the rerouted weights are returned.
pub(crate) fn contains_all_densest(g: &UndirectedGraph, inside: &[bool], state: &UdsState) -> Option<Vec<f64>> {
    let w = rerouted_weights(g, inside, state);
    let min_in = (0..g.n())
        .filter(|&v| inside[v])
        .map(|v| w[v])
        .fold(f64::INFINITY, f64::min);
    let max_out = (0..g.n())
        .filter(|&v| !inside[v])
        .map(|v| w[v])
        .fold(f64::NEG_INFINITY, f64::max);
    (min_in >= max_out + WEIGHT_TOL).then_some(w)
}

fn verify_inside(g: &UndirectedGraph, s: &[usize], w: &[f64]) -> Result<bool> {
    if goldberg_condition(g, s, w)? {
        return Ok(true);
    }
    let sub = g.induced_subgraph(s)?;
    if sub.graph.m() == 0 {
        return Ok(false);
    }
    Ok(denser_than(&sub.graph, sub.graph.m() as i128, sub.graph.n() as i128).is_none())
}

/// Which size the exact stop threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopMode {
    /// `1/(n(n-1))` for the whole graph.
    Global,
    /// `1/(|V_C|(|V_C|-1))` for the largest connected component.
    Component(usize),
}

/// `ρ̄ − ρ̲ < 1/(k(k−1))`, compared exactly with a relative margin of
/// `2^-32` on the threshold.
pub fn exact_stop(bounds: DensityBounds, n: usize, mode: StopMode) -> bool {
    let k = match mode {
        StopMode::Global => n,
        StopMode::Component(size) => size,
    };
    gap_clearly_below(bounds.lower, bounds.upper, k as u64)
}

/// `(g − ρ̲)/(2g) < ε/(3 − 2ε)`.
pub fn approx_stop(g: f64, lower: f64, eps: f64) -> bool {
    (g - lower) / (2.0 * g) < eps / (3.0 - 2.0 * eps)
}

/// Result of scanning prefix pairs of the combined weight order.
#[derive(Debug, Clone)]
pub(crate) struct DirectedScan {
    /// Best pair by plain directed density.
    pub best: (Vec<usize>, Vec<usize>),
    /// Best pair by c-biased density at the state's ratio.
    pub best_biased: (Vec<usize>, Vec<usize>),
}

/// Walks the merged list of `S`-roles (by `w_α`) and `T`-roles (by `w_β`)
/// in descending weight order. Each step adds one vertex to one side, so the
/// visited pairs form a monotone staircase; `E(S,T)` is maintained
/// incrementally in `O(m)` total.
pub(crate) fn pava_directed_scan(d: &DirectedGraph, w_alpha: &[f64], w_beta: &[f64], c: f64) -> Option<DirectedScan> {
    let n = d.n();
    let mut items: Vec<(f64, usize, bool)> = Vec::with_capacity(2 * n);
    for v in 0..n {
        if d.out_degree(v) > 0 {
            items.push((w_alpha[v], v, true));
        }
        if d.in_degree(v) > 0 {
            items.push((w_beta[v], v, false));
        }
    }
    items.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap_or(Ordering::Equal)
            .then(x.1.cmp(&y.1))
            .then(y.2.cmp(&x.2))
    });
    let mut in_s = vec![false; n];
    let mut in_t = vec![false; n];
    let (mut e, mut ns, mut nt) = (0u64, 0u64, 0u64);
    let mut best: Option<(u64, u64, u64, usize)> = None;
    let mut best_biased: Option<(f64, usize)> = None;
    for (step, &(_, v, is_s)) in items.iter().enumerate() {
        if is_s {
            in_s[v] = true;
            ns += 1;
            e += d.out_neighbors(v).iter().filter(|&&x| in_t[x]).count() as u64;
        } else {
            in_t[v] = true;
            nt += 1;
            e += d.in_neighbors(v).iter().filter(|&&x| in_s[x]).count() as u64;
        }
        if ns == 0 || nt == 0 {
            continue;
        }
        if best.is_none_or(|(be, bs, bt, _)| cmp_directed(e, ns, nt, be, bs, bt) == Ordering::Greater) {
            best = Some((e, ns, nt, step));
        }
        let biased = 2.0 * c.sqrt() * e as f64 / (c * nt as f64 + ns as f64);
        if best_biased.is_none_or(|(bv, _)| biased > bv) {
            best_biased = Some((biased, step));
        }
    }
    let (_, _, _, step) = best?;
    let (_, bstep) = best_biased?;
    let pair_at = |last: usize| {
        let mut s = Vec::new();
        let mut t = Vec::new();
        for &(_, v, is_s) in &items[..=last] {
            if is_s {
                s.push(v);
            } else {
                t.push(v);
            }
        }
        s.sort_unstable();
        t.sort_unstable();
        (s, t)
    };
    Some(DirectedScan {
        best: pair_at(step),
        best_biased: pair_at(bstep),
    })
}

/// Directed analogue of [`pava_extract`]: the densest staircase pair of the
/// weight orders of a CP(c) state.
pub fn pava_extract_directed(d: &DirectedGraph, state: &DdsState) -> Result<(Vec<usize>, Vec<usize>)> {
    if d.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let scan = pava_directed_scan(d, &state.w_alpha, &state.w_beta, state.c).expect("graph has an arc");
    Ok(scan.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::{init_state_uds, solve_cp_uds, CpOptions, Method, Schedule, StopRule, Strategy};

    fn g(n: usize, e: &[(usize, usize)]) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, e.iter().copied()).unwrap()
    }

    fn triangle() -> UndirectedGraph {
        g(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn k4_pendant() -> UndirectedGraph {
        g(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
    }

    /// Recomputes every prefix density from scratch.
    fn rescan(g: &UndirectedGraph, w: &[f64]) -> f64 {
        let order = weight_order(w);
        (1..=g.n())
            .map(|k| g.density_of(&order[..k]).unwrap())
            .fold(0.0, f64::max)
    }

    #[test]
    fn pava_examples() {
        assert_eq!(pava_extract(&triangle(), &[3.0, 2.0, 1.0]).unwrap(), vec![0, 1, 2]);
        let tp = g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(pava_extract(&tp, &[2.0, 2.0, 2.0, 0.5]).unwrap(), vec![0, 1, 2]);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(pava_extract(&k4, &[1.5; 4]).unwrap(), vec![0, 1, 2, 3]);
        assert!(pava_extract(&g(2, &[]), &[0.0, 0.0]).is_err());
    }

    #[test]
    fn pava_matches_rescan() {
        let gr = k4_pendant();
        for w in [
            [0.1, 0.5, 0.2, 3.0, 2.0],
            [1.0, 1.0, 1.0, 1.0, 1.0],
            [5.0, 4.0, 3.0, 2.0, 1.0],
        ] {
            let s = pava_extract(&gr, &w).unwrap();
            assert_eq!(gr.density_of(&s).unwrap(), rescan(&gr, &w));
        }
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(density_upper_bound(&triangle(), &[1.0, 1.0, 1.0]), 1.0);
        assert_eq!(density_upper_bound(&g(2, &[(0, 1)]), &[0.5, 0.5]), 0.5);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(density_upper_bound(&k4, &[1.5; 4]), 1.5);
        assert_eq!(integral_upper_bound(&[1.5; 4]), 1.5);
        // Floor removes fractional slack: weights (1.2, 1.2, 0.6) on a triangle.
        assert_eq!(integral_upper_bound(&[1.2, 1.2, 0.6]), 1.0);
    }

    #[test]
    fn goldberg_examples() {
        assert!(goldberg_condition(&triangle(), &[0, 1, 2], &[1.0, 1.0, 1.0]).unwrap());
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(goldberg_condition(&k4, &[0, 1, 2, 3], &[1.5; 4]).unwrap());
        // Half-degrees on K4 + pendant with S = V: the K4 prefix (i = 4) has
        // min{6, 6.5} = 6 edges' worth of room, not below ⌈4·7/5⌉ = 6.
        let gr = k4_pendant();
        let half: Vec<f64> = (0..5).map(|v| gr.degree(v) as f64 / 2.0).collect();
        assert!(!goldberg_condition(&gr, &[0, 1, 2, 3, 4], &half).unwrap());
    }

    #[test]
    fn stable_set_examples() {
        let gr = k4_pendant();
        let st = init_state_uds(&gr).unwrap();
        assert!(is_stable_set(&gr, &[0, 1, 2, 3, 4], &st).unwrap());
        // Vertex 3 has the largest weight.
        assert!(!is_stable_set(&gr, &[0, 1, 2], &st).unwrap());
        assert!(!verify_exact_cp(&gr, &[4], &st).unwrap());
    }

    #[test]
    fn verification_after_convergence() {
        let sched = Schedule::new(Method::FrankWolfe, Strategy::Sequential);
        let out = solve_cp_uds(&triangle(), sched, StopRule::Iters(256), &CpOptions::default()).unwrap();
        assert_eq!(out.result.s, vec![0, 1, 2]);
        assert!(verify_exact_cp(&triangle(), &out.result.s, &out.state).unwrap());

        let gr = k4_pendant();
        let out = solve_cp_uds(&gr, sched, StopRule::Iters(256), &CpOptions::default()).unwrap();
        assert_eq!(out.result.s, vec![0, 1, 2, 3]);
        assert!(verify_exact_cp(&gr, &[0, 1, 2, 3], &out.state).unwrap());
    }

    #[test]
    fn stop_rules() {
        let b = |lower, upper| DensityBounds { lower, upper };
        assert!(exact_stop(b(1.0, 1.05), 4, StopMode::Global));
        assert!(!exact_stop(b(1.0, 1.0 + 1.0 / 12.0), 4, StopMode::Global));
        assert!(!exact_stop(b(0.0, 1.0 / 12.0), 4, StopMode::Global));
        assert!(exact_stop(b(1.0, 1.15), 10, StopMode::Component(3)));
        for (g, lo) in [(1.0, 0.0), (5.0, 4.9), (1e-9, 0.0), (3.0, 1.0)] {
            assert!(approx_stop(g, lo, 1.0));
        }
        assert!(!approx_stop(2.0, 1.0, 0.1));
    }

    #[test]
    fn directed_scan_examples() {
        let arc = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let scan = pava_directed_scan(&arc, &[1.0, 0.0], &[0.0, 1.0], 1.0).unwrap();
        assert_eq!(scan.best, (vec![0], vec![1]));
        let star = DirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let scan = pava_directed_scan(&star, &[2.0, 0.0, 0.0, 0.0, 0.0], &[0.0, 2.0, 2.0, 2.0, 2.0], 0.25).unwrap();
        assert_eq!(scan.best, (vec![0], vec![1, 2, 3, 4]));
        assert_eq!(scan.best_biased, (vec![0], vec![1, 2, 3, 4]));
    }
}
