//! Peeling approximations for both problems.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::time::Instant;

use crate::cores::{core_numbers, strict_threshold, xy_core_max_product};
use crate::dds::candidate_ratios_bounded;
use crate::error::{DsdError, Result};
use crate::exact::{cmp_directed, cmp_frac};
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::result::{DsResult, RunStats};

fn nonempty_u(g: &UndirectedGraph) -> Result<()> {
    if g.m() == 0 {
        Err(DsdError::EmptyGraph)
    } else {
        Ok(())
    }
}

fn nonempty_d(d: &DirectedGraph) -> Result<()> {
    if d.m() == 0 {
        Err(DsdError::EmptyGraph)
    } else {
        Ok(())
    }
}

/// Removal order and the number of removals after which the remaining
/// vertex set is densest.
struct Peel {
    order: Vec<usize>,
    best_removed: usize,
    best: (u64, u64),
}

impl Peel {
    fn new(n: usize, m: usize) -> Self {
        Self {
            order: Vec::with_capacity(n),
            best_removed: 0,
            best: (m as u64, n as u64),
        }
    }

    fn record(&mut self, v: usize, edges_left: u64, vertices_left: u64) {
        self.order.push(v);
        if vertices_left > 0 && cmp_frac(edges_left, vertices_left, self.best.0, self.best.1) != Ordering::Less {
            self.best = (edges_left, vertices_left);
            self.best_removed = self.order.len();
        }
    }

    fn remaining(&self, n: usize) -> Vec<usize> {
        let mut gone = vec![false; n];
        for &v in &self.order[..self.best_removed] {
            gone[v] = true;
        }
        (0..n).filter(|&v| !gone[v]).collect()
    }
}

/// Charikar's peeling: repeatedly delete a minimum-degree vertex (ties:
/// smaller id) and keep the densest intermediate subgraph.
pub fn greedy(g: &UndirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    nonempty_u(g)?;
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut buckets = vec![BTreeSet::new(); g.max_degree() + 1];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut alive = vec![true; n];
    let mut edges = g.m() as u64;
    let mut peel = Peel::new(n, g.m());
    let mut low = 0;
    for left in (0..n).rev() {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("nonempty bucket");
        alive[v] = false;
        edges -= deg[v] as u64;
        for &u in g.neighbors(v) {
            if alive[u] {
                buckets[deg[u]].remove(&u);
                deg[u] -= 1;
                buckets[deg[u]].insert(u);
                low = low.min(deg[u]);
            }
        }
        peel.record(v, edges, left as u64);
    }
    let mut res = DsResult::undirected(g, peel.remaining(n))?;
    res.stats.iterations = 1;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

/// One load-carrying peeling pass; returns the densest suffix seen.
fn greedy_pp_round(g: &UndirectedGraph, load: &mut [u64]) -> ((u64, u64), Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = (0..n).map(|v| Reverse((load[v] + deg[v], v))).collect();
    let mut alive = vec![true; n];
    let mut edges = g.m() as u64;
    let mut peel = Peel::new(n, g.m());
    let mut left = n as u64;
    while let Some(Reverse((key, v))) = heap.pop() {
        if !alive[v] || key != load[v] + deg[v] {
            continue;
        }
        alive[v] = false;
        left -= 1;
        load[v] += deg[v];
        edges -= deg[v];
        for &u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                heap.push(Reverse((load[u] + deg[u], u)));
            }
        }
        peel.record(v, edges, left);
    }
    (peel.best, peel.remaining(n))
}

/// Greedy++ with `t` rounds; loads carry over between rounds. With
/// `multi_reduction`, the graph is cut down to the (⌊ρ̲⌋ + 1)-core after every
/// round that raised the best density (loads follow their vertices).
pub fn greedy_pp_with(g: &UndirectedGraph, t: usize, multi_reduction: bool) -> Result<DsResult> {
    let start = Instant::now();
    nonempty_u(g)?;
    if t == 0 {
        return Err(DsdError::InvalidParameter("greedy++ needs at least one round".into()));
    }
    let mut stats = RunStats {
        edge_trace: vec![g.m()],
        ..RunStats::default()
    };
    let mut work = g.clone();
    let mut to_parent: Vec<usize> = (0..g.n()).collect();
    let mut load = vec![0u64; g.n()];
    let mut best: Option<((u64, u64), Vec<usize>)> = None;
    let mut threshold = 0;
    for _ in 0..t {
        stats.iterations += 1;
        let (value, local) = greedy_pp_round(&work, &mut load);
        if best
            .as_ref()
            .is_none_or(|(b, _)| cmp_frac(value.0, value.1, b.0, b.1) == Ordering::Greater)
        {
            best = Some((value, local.iter().map(|&v| to_parent[v]).collect()));
        }
        if multi_reduction {
            let (b, _) = best.as_ref().unwrap();
            let k = strict_threshold(b.0 as f64 / b.1 as f64);
            if k > threshold {
                threshold = k;
                let keep = core_numbers(&work).k_core(k);
                if !keep.is_empty() && keep.len() < work.n() {
                    let sub = work.induced_subgraph(&keep)?;
                    load = sub.to_parent.iter().map(|&v| load[v]).collect();
                    to_parent = sub.to_parent.iter().map(|&v| to_parent[v]).collect();
                    work = sub.graph;
                    stats.reductions += 1;
                    stats.edge_trace.push(work.m());
                }
            }
        }
    }
    let (_, set) = best.expect("at least one round");
    let mut res = DsResult::undirected(g, set)?;
    stats.elapsed = start.elapsed();
    res.stats = stats;
    Ok(res)
}

/// Greedy++ with `t` rounds and no reduction.
pub fn greedy_pp(g: &UndirectedGraph, t: usize) -> Result<DsResult> {
    greedy_pp_with(g, t, false)
}

/// The k*-core.
pub fn core_app(g: &UndirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    nonempty_u(g)?;
    let cores = core_numbers(g);
    let mut res = DsResult::undirected(g, cores.k_core(cores.k_star))?;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

struct PairBest {
    key: (u64, u64, u64),
    pair: (Vec<usize>, Vec<usize>),
}

impl PairBest {
    fn better(&self, e: u64, s: u64, t: u64) -> bool {
        cmp_directed(e, s, t, self.key.0, self.key.1, self.key.2) == Ordering::Greater
    }
}

/// Peels towards ratio `c`: while `|S|/|T| ≥ c` remove the vertex of `S`
/// with fewest arcs into `T`, otherwise the vertex of `T` with fewest arcs
/// from `S` (ties: smaller id). Returns the best `(E, |S|, |T|)` and the
/// removal step at which it occurred.
fn d_greedy_ratio(d: &DirectedGraph, a: u64, b: u64) -> ((u64, u64, u64), Vec<(usize, bool)>, usize) {
    let n = d.n();
    let mut in_s: Vec<bool> = (0..n).map(|v| d.out_degree(v) > 0).collect();
    let mut in_t: Vec<bool> = (0..n).map(|v| d.in_degree(v) > 0).collect();
    let mut dout: Vec<usize> = (0..n).map(|v| d.out_degree(v)).collect();
    let mut din: Vec<usize> = (0..n).map(|v| d.in_degree(v)).collect();
    let mut hs: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).filter(|&v| in_s[v]).map(|v| Reverse((dout[v], v))).collect();
    let mut ht: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).filter(|&v| in_t[v]).map(|v| Reverse((din[v], v))).collect();
    let (mut ns, mut nt) = (hs.len() as u64, ht.len() as u64);
    let mut e = d.m() as u64;
    let mut best = (e, ns, nt);
    let mut best_step = 0;
    let mut steps = Vec::new();
    while ns > 0 && nt > 0 {
        let from_s = ns * b >= nt * a;
        if from_s {
            let v = loop {
                let Reverse((k, v)) = hs.pop().expect("S nonempty");
                if in_s[v] && k == dout[v] {
                    break v;
                }
            };
            in_s[v] = false;
            ns -= 1;
            e -= dout[v] as u64;
            for &x in d.out_neighbors(v) {
                if in_t[x] {
                    din[x] -= 1;
                    ht.push(Reverse((din[x], x)));
                }
            }
            steps.push((v, true));
        } else {
            let v = loop {
                let Reverse((k, v)) = ht.pop().expect("T nonempty");
                if in_t[v] && k == din[v] {
                    break v;
                }
            };
            in_t[v] = false;
            nt -= 1;
            e -= din[v] as u64;
            for &x in d.in_neighbors(v) {
                if in_s[x] {
                    dout[x] -= 1;
                    hs.push(Reverse((dout[x], x)));
                }
            }
            steps.push((v, false));
        }
        if ns > 0 && nt > 0 && cmp_directed(e, ns, nt, best.0, best.1, best.2) == Ordering::Greater {
            best = (e, ns, nt);
            best_step = steps.len();
        }
    }
    (best, steps, best_step)
}

/// Directed peeling repeated for every candidate ratio.
pub fn d_greedy(d: &DirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    nonempty_d(d)?;
    let n = d.n();
    let sources = (0..n).filter(|&v| d.out_degree(v) > 0).count() as u64;
    let sinks = (0..n).filter(|&v| d.in_degree(v) > 0).count() as u64;
    let mut best: Option<PairBest> = None;
    let mut stats = RunStats::default();
    for r in candidate_ratios_bounded(sources, sinks) {
        stats.ratios_probed += 1;
        let (key, steps, at) = d_greedy_ratio(d, r.a, r.b);
        if best.as_ref().is_none_or(|b| b.better(key.0, key.1, key.2)) {
            let mut in_s: Vec<bool> = (0..n).map(|v| d.out_degree(v) > 0).collect();
            let mut in_t: Vec<bool> = (0..n).map(|v| d.in_degree(v) > 0).collect();
            for &(v, side) in &steps[..at] {
                if side {
                    in_s[v] = false;
                } else {
                    in_t[v] = false;
                }
            }
            let s = (0..n).filter(|&v| in_s[v]).collect();
            let t = (0..n).filter(|&v| in_t[v]).collect();
            best = Some(PairBest { key, pair: (s, t) });
        }
    }
    let (s, t) = best.expect("at least one ratio").pair;
    let mut res = DsResult::directed(d, s, t)?;
    stats.iterations = stats.ratios_probed as u64;
    stats.elapsed = start.elapsed();
    res.stats = stats;
    Ok(res)
}

/// The `[x, y]`-core maximising `x·y`.
pub fn xy_core_app(d: &DirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    nonempty_d(d)?;
    let core = xy_core_max_product(d)?;
    let mut res = DsResult::directed(d, core.s, core.t)?;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

/// Arc peeling by weight `d⁺(u)·d⁻(v)` in the remaining subgraph: the arc of
/// least weight (ties: smaller `(u, v)`) is deleted, degrees and weights are
/// updated, and the best pair `(tails, heads)` of the surviving arcs is kept.
pub fn w_core_app(d: &DirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    nonempty_d(d)?;
    let n = d.n();
    let arcs = d.edges();
    let mut dout: Vec<u64> = (0..n).map(|v| d.out_degree(v) as u64).collect();
    let mut din: Vec<u64> = (0..n).map(|v| d.in_degree(v) as u64).collect();
    let mut alive = vec![true; arcs.len()];
    let weight = |dout: &[u64], din: &[u64], e: usize| dout[arcs[e].0] * din[arcs[e].1];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
        (0..arcs.len()).map(|e| Reverse((weight(&dout, &din, e), e))).collect();
    let mut ns = dout.iter().filter(|&&x| x > 0).count() as u64;
    let mut nt = din.iter().filter(|&&x| x > 0).count() as u64;
    let mut m = arcs.len() as u64;
    let mut best = (m, ns, nt);
    let mut best_removed = 0;
    let mut removed = Vec::with_capacity(arcs.len());

    // Out-arcs of u and in-arcs of v, as arc indices (arcs are sorted by tail).
    let mut first_out = vec![0usize; n + 1];
    for &(u, _) in arcs {
        first_out[u + 1] += 1;
    }
    for v in 0..n {
        first_out[v + 1] += first_out[v];
    }
    let mut in_arcs = vec![Vec::new(); n];
    for (e, &(_, v)) in arcs.iter().enumerate() {
        in_arcs[v].push(e);
    }

    while let Some(Reverse((w, e))) = heap.pop() {
        if !alive[e] || w != weight(&dout, &din, e) {
            continue;
        }
        alive[e] = false;
        removed.push(e);
        let (u, v) = arcs[e];
        dout[u] -= 1;
        din[v] -= 1;
        m -= 1;
        if dout[u] == 0 {
            ns -= 1;
        }
        if din[v] == 0 {
            nt -= 1;
        }
        for f in (first_out[u]..first_out[u + 1]).chain(in_arcs[v].iter().copied()) {
            if alive[f] {
                heap.push(Reverse((weight(&dout, &din, f), f)));
            }
        }
        if m > 0 && cmp_directed(m, ns, nt, best.0, best.1, best.2) == Ordering::Greater {
            best = (m, ns, nt);
            best_removed = removed.len();
        }
    }
    let mut keep = vec![true; arcs.len()];
    for &e in &removed[..best_removed] {
        keep[e] = false;
    }
    let mut in_s = vec![false; n];
    let mut in_t = vec![false; n];
    for (e, &(u, v)) in arcs.iter().enumerate() {
        if keep[e] {
            in_s[u] = true;
            in_t[v] = true;
        }
    }
    let s = (0..n).filter(|&v| in_s[v]).collect();
    let t = (0..n).filter(|&v| in_t[v]).collect();
    let mut res = DsResult::directed(d, s, t)?;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, e.iter().copied()).unwrap()
    }

    fn k(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn undirected_examples() {
        assert_eq!(greedy(&k(4)).unwrap().density, 1.5);
        let tp = g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(greedy(&tp).unwrap().s, vec![0, 1, 2]);
        let p3 = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(greedy(&p3).unwrap().density, 2.0 / 3.0);
        for t in 1..5 {
            assert_eq!(greedy_pp(&k(4), t).unwrap().density, 1.5);
        }
        assert_eq!(greedy_pp(&tp, 1).unwrap().s, greedy(&tp).unwrap().s);
        assert_eq!(core_app(&tp).unwrap().s, vec![0, 1, 2]);
        assert_eq!(core_app(&k(5)).unwrap().density, 2.0);
        let two = g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let res = core_app(&two).unwrap();
        assert_eq!((res.s.len(), res.density), (6, 1.0));
    }

    #[test]
    fn directed_examples() {
        let arc = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(d_greedy(&arc).unwrap().density, 1.0);
        let res = xy_core_app(&arc).unwrap();
        assert_eq!((res.s.clone(), res.t.clone()), (vec![0], Some(vec![1])));

        let star = DirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(d_greedy(&star).unwrap().density, 2.0);
        assert_eq!(w_core_app(&star).unwrap().density, 2.0);
        assert!(xy_core_app(&star).unwrap().density >= 1.0);

        let two_cycle = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(d_greedy(&two_cycle).unwrap().density >= 0.5);

        let k3: Vec<(usize, usize)> = (0..3)
            .flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let k3 = DirectedGraph::from_edges(3, k3).unwrap();
        let res = xy_core_app(&k3).unwrap();
        assert_eq!((res.s.len(), res.t.as_ref().unwrap().len(), res.density), (3, 3, 2.0));

        let c3 = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(w_core_app(&c3).unwrap().density, 1.0);
    }
}
