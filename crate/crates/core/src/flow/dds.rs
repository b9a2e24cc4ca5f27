//! Parametric networks for the c-biased directed problem.
//!
//! For a ratio `c = a/b` the c-biased density of `(S, T)` is
//! `2 sqrt(ab) * h(S, T)` with `h = |E(S,T)| / (b|S| + a|T|)`, so each ratio
//! reduces to maximising the linear-fractional `h`.

use std::cmp::Ordering;

use crate::error::{DsdError, Result};
use crate::exact::{dyadic, gap_below};
use crate::graph::DirectedGraph;

use super::maxflow::FlowNetwork;

/// Network deciding `∃ (S,T): |E(S,T)| > num/den · (b|S| + a|T|)`.
///
/// Nodes: `u` (left copy, `u ∈ S`), `n + v` (right copy, `v ∈ T`), source
/// `2n`, sink `2n + 1`. Arcs: `s → u` with `d⁺(u)`, `u → n+v` with 1 per arc,
/// `u → t` with `h·b`, `n+v → t` with `h·a`, all scaled by `den`. A cut with
/// left side `S` and right side `T` costs `den·(m − |E(S,T)|) + num·(b|S| + a|T|)`.
pub(crate) fn dds_network_frac(d: &DirectedGraph, a: i128, b: i128, num: i128, den: i128) -> FlowNetwork<i128> {
    let n = d.n();
    (d.m() as i128)
        .checked_mul(den)
        .and_then(|x| x.checked_mul(4))
        .and_then(|_| num.checked_mul(a.max(b)))
        .and_then(|x| x.checked_mul(2 * n as i128 + 1))
        .expect("flow capacities overflow i128");
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2, s, t);
    for u in 0..n {
        let out = d.out_degree(u) as i128;
        if out > 0 {
            net.add_arc(s, u, out * den);
            net.add_arc(u, t, num * b);
        }
        if d.in_degree(u) > 0 {
            net.add_arc(n + u, t, num * a);
        }
    }
    for &(u, v) in d.edges() {
        net.add_arc(u, n + v, den);
    }
    net
}

/// A pair `(S, T)` with `h(S,T) > num/den` at ratio `a/b`, if any.
pub(crate) fn dds_denser_than(
    d: &DirectedGraph,
    a: i128,
    b: i128,
    num: i128,
    den: i128,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut net = dds_network_frac(d, a, b, num, den);
    let value = net.max_flow();
    if value < d.m() as i128 * den {
        let side = net.source_side();
        let n = d.n();
        let s: Vec<usize> = (0..n).filter(|&u| side[u]).collect();
        let t: Vec<usize> = (0..n).filter(|&v| side[n + v]).collect();
        debug_assert!(!s.is_empty() && !t.is_empty());
        Some((s, t))
    } else {
        None
    }
}

/// Real-valued version of the DDS network: decides whether some `(S, T)`
/// has c-biased density above `g`. Capacities follow from
/// `ρ_c = 2 sqrt(c) |E(S,T)| / (c|T| + |S|)`.
pub fn build_dds_network(d: &DirectedGraph, c: f64, g: f64) -> Result<FlowNetwork<f64>> {
    if !(c > 0.0 && c.is_finite()) || !(g >= 0.0 && g.is_finite()) {
        return Err(DsdError::InvalidParameter(format!(
            "need c > 0 and g >= 0, got c={c}, g={g}"
        )));
    }
    let n = d.n();
    let (s, t) = (2 * n, 2 * n + 1);
    let per_s = g / (2.0 * c.sqrt());
    let per_t = g * c.sqrt() / 2.0;
    let mut net = FlowNetwork::new(2 * n + 2, s, t);
    for u in 0..n {
        if d.out_degree(u) > 0 {
            net.add_arc(s, u, d.out_degree(u) as f64);
            net.add_arc(u, t, per_s);
        }
        if d.in_degree(u) > 0 {
            net.add_arc(n + u, t, per_t);
        }
    }
    for &(u, v) in d.edges() {
        net.add_arc(u, n + v, 1.0);
    }
    Ok(net)
}

/// Outcome of solving one ratio.
#[derive(Debug, Clone)]
pub(crate) struct RatioSolution {
    /// Best pair found, in the ids of the graph that was solved.
    pub pair: Option<(Vec<usize>, Vec<usize>)>,
    /// Certified upper bound on the best c-biased density at this ratio.
    pub upper: f64,
    pub iterations: u64,
}

pub(crate) fn h_value(d: &DirectedGraph, a: u64, b: u64, s: &[usize], t: &[usize]) -> (u64, u64) {
    let e = d.arcs_between(s, t).expect("ids in range") as u64;
    (e, b * s.len() as u64 + a * t.len() as u64)
}

/// Exact maximiser of `h` at ratio `a/b` by binary search. The search
/// starts from `lo_hint` (a guess for `h`, possibly 0) and stops when the
/// gap is below `1/(Q(Q-1))` with `Q = (a+b) n`, which separates any two
/// distinct values of `h`.
pub(crate) fn solve_ratio_flow(d: &DirectedGraph, a: u64, b: u64, lo_hint: f64) -> RatioSolution {
    let scale = 2.0 * ((a * b) as f64).sqrt();
    let degree_cap = (d.max_out_degree() as f64 / b as f64).min(d.max_in_degree() as f64 / a as f64);
    let mut hi = degree_cap.next_up();
    let mut lo = lo_hint.max(0.0);
    let mut iterations = 0;
    if d.m() == 0 || lo >= hi {
        return RatioSolution {
            pair: None,
            upper: if d.m() == 0 { 0.0 } else { scale * hi },
            iterations,
        };
    }
    let q = (a + b) * d.n() as u64;
    let (ai, bi) = (a as i128, b as i128);
    let mut best: Option<((u64, u64), (Vec<usize>, Vec<usize>))> = None;

    let better = |cand: (u64, u64), best: &Option<((u64, u64), (Vec<usize>, Vec<usize>))>| match best {
        None => true,
        Some(((e, w), _)) => (cand.0 as u128 * *w as u128).cmp(&(*e as u128 * cand.1 as u128)) == Ordering::Greater,
    };

    while !gap_below(lo, hi, q) {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let (num, shift) = dyadic(mid);
        match dds_denser_than(d, ai, bi, num, 1i128 << shift) {
            Some((s, t)) => {
                lo = mid;
                let hv = h_value(d, a, b, &s, &t);
                if better(hv, &best) {
                    best = Some((hv, (s, t)));
                }
            }
            None => hi = mid,
        }
    }

    if best.is_none() && lo > 0.0 {
        // Nothing above the hint was seen; settle the interval (lo, hi).
        iterations += 1;
        let (num, shift) = dyadic(lo);
        match dds_denser_than(d, ai, bi, num, 1i128 << shift) {
            None => {
                return RatioSolution {
                    pair: None,
                    upper: scale * lo,
                    iterations,
                }
            }
            Some((s, t)) => best = Some((h_value(d, a, b, &s, &t), (s, t))),
        }
    }

    // Confirm the maximiser exactly; a denser pair replaces it.
    if let Some(((mut e, mut w), _)) = best {
        loop {
            iterations += 1;
            match dds_denser_than(d, ai, bi, e as i128, w as i128) {
                None => break,
                Some((s, t)) => {
                    let hv = h_value(d, a, b, &s, &t);
                    e = hv.0;
                    w = hv.1;
                    best = Some((hv, (s, t)));
                }
            }
        }
        let (e, w) = best.as_ref().unwrap().0;
        return RatioSolution {
            upper: scale * (e as f64 / w as f64),
            pair: best.map(|(_, p)| p),
            iterations,
        };
    }
    RatioSolution {
        pair: None,
        upper: scale * hi,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_network_matches_profit_formula() {
        // 2-cycle at c = 1: h* = 2 / (2 + 2) = 1/2.
        let d = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(dds_denser_than(&d, 1, 1, 49, 100).is_some());
        assert!(dds_denser_than(&d, 1, 1, 1, 2).is_none());
        let sol = solve_ratio_flow(&d, 1, 1, 0.0);
        let (s, t) = sol.pair.unwrap();
        assert_eq!((s, t), (vec![0, 1], vec![0, 1]));
        assert!((sol.upper - 1.0).abs() < 1e-15);
    }

    #[test]
    fn star_at_quarter() {
        let d = DirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let sol = solve_ratio_flow(&d, 1, 4, 0.0);
        let (s, t) = sol.pair.unwrap();
        assert_eq!((s, t), (vec![0], vec![1, 2, 3, 4]));
        assert!((sol.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn real_network_agrees() {
        let d = DirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let full = d.m() as f64;
        let mut net = build_dds_network(&d, 0.25, 1.9).unwrap();
        assert!(net.max_flow() < full - 1e-9);
        let mut net = build_dds_network(&d, 0.25, 2.0).unwrap();
        assert!(net.max_flow() >= full - 1e-9);
        assert!(build_dds_network(&d, 0.0, 1.0).is_err());
    }
}
