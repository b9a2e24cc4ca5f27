//! Goldberg's parametric network and the binary-search solvers built on it.

use std::cmp::Ordering;
use std::time::Instant;

use log::debug;

use crate::cores::{core_numbers, strict_threshold};
use crate::error::{DsdError, Result};
use crate::exact::{cmp_frac, dyadic, gap_below};
use crate::graph::{mask_to_set, UndirectedGraph};
use crate::result::{DsResult, RunStats};

use super::maxflow::FlowNetwork;

/// Binary-search mode of [`uds_flow_exact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowReduction {
    /// Plain binary search on the whole graph; stop gap `1/(n(n-1))`.
    None,
    /// Re-reduce to the (⌊ρ̲⌋ + 1)-core whenever the lower bound rises and stop
    /// on the largest connected component's gap.
    Multi,
}

/// Goldberg's network for guess `num/den`, with every capacity multiplied
/// by `den`. Node `v < n` is vertex `v`; `n` is the source, `n + 1` the sink.
///
/// The cut `({s} ∪ S, rest)` costs `den * (n m + 2 g |S| - 2 |E(S)|)`, so
/// the max flow is below `den * n * m` exactly when some `S` has density
/// above `g`.
pub(crate) fn uds_network_frac(g: &UndirectedGraph, num: i128, den: i128) -> FlowNetwork<i128> {
    let (n, m) = (g.n() as i128, g.m() as i128);
    assert!(den > 0 && num >= 0);
    n.checked_mul(m)
        .and_then(|x| x.checked_mul(den))
        .and_then(|x| x.checked_mul(4))
        .expect("flow capacities overflow i128");
    let s = g.n();
    let t = g.n() + 1;
    let mut net = FlowNetwork::new(g.n() + 2, s, t);
    for v in 0..g.n() {
        net.add_arc(s, v, m * den);
        let to_sink = m * den + 2 * num - g.degree(v) as i128 * den;
        net.add_arc(v, t, to_sink.max(0));
    }
    for &(u, v) in g.edges() {
        net.add_arc(u, v, den);
        net.add_arc(v, u, den);
    }
    net
}

/// Goldberg's network for a real guess `g`, decoded without rounding.
pub fn build_uds_network(graph: &UndirectedGraph, g: f64) -> Result<FlowNetwork<i128>> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(DsdError::InvalidParameter(format!(
            "guess must be finite and >= 0, got {g}"
        )));
    }
    let (num, shift) = dyadic(g);
    Ok(uds_network_frac(graph, num, 1i128 << shift))
}

/// Vertices on the source side of the minimal minimum cut, without `s`.
fn cut_vertices(net: &FlowNetwork<i128>, n: usize) -> Vec<usize> {
    let side = net.source_side();
    mask_to_set(&side[..n])
}

/// Some vertex set with density strictly above `num/den`, if one exists.
pub(crate) fn denser_than(g: &UndirectedGraph, num: i128, den: i128) -> Option<Vec<usize>> {
    let mut net = uds_network_frac(g, num, den);
    let full = g.n() as i128 * g.m() as i128 * den;
    let value = net.max_flow();
    if value < full {
        let s = cut_vertices(&net, g.n());
        debug_assert!(!s.is_empty());
        Some(s)
    } else {
        None
    }
}

fn denser_than_f64(g: &UndirectedGraph, guess: f64) -> Option<Vec<usize>> {
    let (num, shift) = dyadic(guess);
    denser_than(g, num, 1i128 << shift)
}

/// Tracks the best vertex set seen so far, compared exactly.
#[derive(Debug, Clone)]
pub(crate) struct BestSet {
    pub set: Vec<usize>,
    pub edges: u64,
}

impl BestSet {
    pub fn new(g: &UndirectedGraph, set: Vec<usize>) -> Self {
        let edges = g.edges_within(&set).expect("ids in range") as u64;
        Self { set, edges }
    }

    pub fn density(&self) -> f64 {
        self.edges as f64 / self.set.len() as f64
    }

    /// Replaces the stored set when `set` is strictly denser.
    pub fn offer(&mut self, g: &UndirectedGraph, set: Vec<usize>) -> bool {
        if set.is_empty() {
            return false;
        }
        let edges = g.edges_within(&set).expect("ids in range") as u64;
        if cmp_frac(edges, set.len() as u64, self.edges, self.set.len() as u64) == Ordering::Greater {
            self.set = set;
            self.edges = edges;
            true
        } else {
            false
        }
    }
}

/// The densest connected component of `g[set]`, in parent ids.
pub(crate) fn densest_component(g: &UndirectedGraph, set: &[usize]) -> Vec<usize> {
    let sub = g.induced_subgraph(set).expect("ids in range");
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    for comp in sub.graph.connected_components() {
        let e = sub.graph.edges_within(&comp).unwrap() as u64;
        let k = comp.len() as u64;
        let better = match &best {
            None => true,
            Some((be, bk, _)) => cmp_frac(e, k, *be, *bk) == Ordering::Greater,
        };
        if better {
            best = Some((e, k, comp));
        }
    }
    sub.lift(&best.expect("non-empty set").2)
}

fn largest_component(g: &UndirectedGraph) -> usize {
    g.connected_components().iter().map(Vec::len).max().unwrap_or(0)
}

/// Exact densest subgraph by binary search over Goldberg networks.
///
/// The search keeps `ρ̲ < ρ(best) ≤ ρ* ≤ ρ̄` and stops once the gap drops
/// below `1/(k(k-1))`, where `k` is `n` (or the largest component size in
/// [`FlowReduction::Multi`] mode). A last max-flow confirms that nothing is
/// denser than the returned set.
pub fn uds_flow_exact(g: &UndirectedGraph, reduction: FlowReduction) -> Result<DsResult> {
    let start = Instant::now();
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let cores = core_numbers(g);
    let k_star = cores.k_star;
    let mut lo = k_star as f64 / 2.0;
    let mut hi = k_star as f64;
    let mut best = BestSet::new(g, cores.k_core(k_star));
    let mut stats = RunStats {
        edge_trace: vec![g.m()],
        ..RunStats::default()
    };

    // `work` is an induced subgraph of `g` guaranteed to hold every densest
    // subgraph; `to_parent` maps its ids back.
    let mut work = g.clone();
    let mut to_parent: Vec<usize> = (0..g.n()).collect();
    let component_mode = reduction == FlowReduction::Multi;
    let mut last_threshold = 0;

    let shrink = |work: &mut UndirectedGraph, to_parent: &mut Vec<usize>, lo: f64, stats: &mut RunStats| {
        let k = strict_threshold(lo);
        let keep = core_numbers(work).k_core(k);
        if keep.len() < work.n() && !keep.is_empty() {
            let sub = work.induced_subgraph(&keep).unwrap();
            *to_parent = sub.to_parent.iter().map(|&v| to_parent[v]).collect();
            *work = sub.graph;
            stats.reductions += 1;
            stats.edge_trace.push(work.m());
            debug!("reduced to {}-core: n={} m={}", k, work.n(), work.m());
        }
    };

    if component_mode {
        shrink(&mut work, &mut to_parent, lo, &mut stats);
        last_threshold = strict_threshold(lo);
    }

    loop {
        let k = if component_mode {
            largest_component(&work)
        } else {
            work.n()
        };
        if gap_below(lo, hi, k as u64) {
            break;
        }
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        stats.iterations += 1;
        match denser_than_f64(&work, mid) {
            Some(local) => {
                lo = mid;
                let mut set: Vec<usize> = local.iter().map(|&v| to_parent[v]).collect();
                if component_mode {
                    set = densest_component(g, &set);
                }
                best.offer(g, set);
                if component_mode && strict_threshold(lo) > last_threshold {
                    last_threshold = strict_threshold(lo);
                    shrink(&mut work, &mut to_parent, lo, &mut stats);
                }
            }
            None => hi = mid,
        }
    }

    // Certificate: no subgraph of the working graph beats `best`.
    let mut verified = false;
    for _ in 0..g.n() {
        stats.iterations += 1;
        match denser_than(&work, best.edges as i128, best.set.len() as i128) {
            None => {
                verified = true;
                break;
            }
            Some(local) => {
                let set: Vec<usize> = local.iter().map(|&v| to_parent[v]).collect();
                best.offer(g, densest_component(g, &set));
            }
        }
    }

    let mut res = DsResult::undirected(g, best.set)?;
    res.verified = verified;
    stats.elapsed = start.elapsed();
    res.stats = stats;
    Ok(res)
}

/// The best level-prefix of the residual BFS tree: for each distance `k`,
/// the graph vertices within distance `k` of the source.
fn residual_level_candidate(g: &UndirectedGraph, net: &FlowNetwork<i128>) -> Option<Vec<usize>> {
    let levels = net.residual_levels();
    let max_level = levels[..g.n()].iter().flatten().copied().max()?;
    let mut best: Option<BestSet> = None;
    for k in 1..=max_level {
        let set: Vec<usize> = (0..g.n()).filter(|&v| levels[v].is_some_and(|l| l <= k)).collect();
        if set.is_empty() {
            continue;
        }
        match &mut best {
            None => best = Some(BestSet::new(g, set)),
            Some(b) => {
                b.offer(g, set);
            }
        }
    }
    best.map(|b| b.set)
}

/// (1+ε)-approximate densest subgraph with a budget of `h` blocking-flow
/// phases per guess (default ⌈log₂ m⌉).
///
/// After the budget, a guess is settled early only when the residual level
/// sets already contain a set of density at least the guess; otherwise the
/// flow is finished. The loop stops once `ρ̄ ≤ (1+ε) ρ(best)`.
pub fn uds_flow_approx(g: &UndirectedGraph, eps: f64, h: Option<usize>) -> Result<DsResult> {
    let start = Instant::now();
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DsdError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let h = h
        .unwrap_or_else(|| (g.m() as f64).log2().ceil().max(1.0) as usize)
        .max(1);
    let cores = core_numbers(g);
    let mut hi = cores.k_star as f64;
    let mut best = BestSet::new(g, cores.k_core(cores.k_star));
    let mut lo = best.density();
    let mut stats = RunStats {
        edge_trace: vec![g.m()],
        ..RunStats::default()
    };

    while hi > (1.0 + eps) * best.density() {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        stats.iterations += 1;
        let (num, shift) = dyadic(mid);
        let den = 1i128 << shift;
        let mut net = uds_network_frac(g, num, den);
        let mut finished = false;
        for _ in 0..h {
            if !net.blocking_phase() {
                finished = true;
                break;
            }
        }
        if !finished {
            if let Some(cand) = residual_level_candidate(g, &net) {
                let e = g.edges_within(&cand).unwrap() as i128;
                // Accept when e / |cand| >= num / den.
                if e * den >= num * cand.len() as i128 {
                    best.offer(g, cand);
                    lo = lo.max(best.density());
                    continue;
                }
            }
            net.max_flow();
        }
        let full = g.n() as i128 * g.m() as i128 * den;
        if net.flow_value() < full {
            best.offer(g, cut_vertices(&net, g.n()));
            lo = mid.max(best.density());
        } else {
            hi = mid;
        }
    }

    let mut res = DsResult::undirected(g, best.set)?;
    res.verified = hi <= (1.0 + eps) * res.density;
    stats.elapsed = start.elapsed();
    res.stats = stats;
    Ok(res)
}
