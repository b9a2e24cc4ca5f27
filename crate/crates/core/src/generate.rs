//! Seeded synthetic graphs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DsdError, Result};
use crate::graph::{DirectedGraph, UndirectedGraph};

fn clique_edges(offset: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (offset + u, offset + v)))
        .collect()
}

/// Two `k`-cliques on `0..k` and `k..2k` joined by the edge `(k−1, k)`,
/// with `⌊fraction·C(k,2)⌋` edges of the second clique removed uniformly
/// at random.
pub fn gen_two_clique(k: usize, removal_fraction: f64, seed: u64) -> Result<UndirectedGraph> {
    if k < 3 {
        return Err(DsdError::InvalidParameter(format!(
            "clique size must be at least 3, got {k}"
        )));
    }
    if !(0.0..1.0).contains(&removal_fraction) {
        return Err(DsdError::InvalidParameter(format!(
            "removal fraction must lie in [0, 1), got {removal_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let second = clique_edges(k, k);
    let remove = (removal_fraction * second.len() as f64).floor() as usize;
    let mut dropped = vec![false; second.len()];
    for i in sample(&mut rng, second.len(), remove) {
        dropped[i] = true;
    }
    let mut edges = clique_edges(0, k);
    edges.push((k - 1, k));
    edges.extend(second.into_iter().zip(dropped).filter(|(_, d)| !d).map(|(e, _)| e));
    UndirectedGraph::from_edges(2 * k, edges)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<UndirectedGraph> {
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, edges)
}

/// Random digraph: every ordered pair `u ≠ v` is an arc with probability `p`.
pub fn gen_digraph(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    DirectedGraph::from_edges(n, arcs)
}

/// Chung-Lu graph with expected degrees `∝ (i + 1)^(−1/(exponent − 1))`,
/// scaled to the requested average degree.
pub fn gen_power_law(n: usize, avg_degree: f64, exponent: f64, seed: u64) -> Result<UndirectedGraph> {
    if exponent <= 1.0 || avg_degree <= 0.0 || n < 2 {
        return Err(DsdError::InvalidParameter(format!(
            "power law needs n >= 2, avg_degree > 0, exponent > 1 (got {n}, {avg_degree}, {exponent})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-1.0 / (exponent - 1.0))).collect();
    let total: f64 = raw.iter().sum();
    let w: Vec<f64> = raw.iter().map(|x| x * avg_degree * n as f64 / total).collect();
    let sum_w: f64 = w.iter().sum();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool((w[u] * w[v] / sum_w).min(1.0)) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, edges)
}

/// Named small graphs for oracle comparisons: `random` seeded `G(n, p)`
/// instances with `n ≤ 12`, followed by cliques, lollipops, complete
/// bipartite graphs, disjoint unions and a few sparse shapes.
pub fn small_uds_corpus(random: usize) -> Vec<(String, UndirectedGraph)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < random {
        let n = 4 + (seed % 9) as usize;
        let p = [0.2, 0.35, 0.5, 0.7][(seed / 9 % 4) as usize];
        let g = gen_gnp(n, p, seed).expect("valid probability");
        if g.m() > 0 {
            out.push((format!("gnp-n{n}-p{p}-s{seed}"), g));
        }
        seed += 1;
    }
    let build = |n: usize, edges: Vec<(usize, usize)>| UndirectedGraph::from_edges(n, edges).expect("ids in range");
    for k in 2..=7 {
        out.push((format!("clique-{k}"), build(k, clique_edges(0, k))));
    }
    for (k, tail) in [(3, 2), (4, 3), (5, 4)] {
        let mut e = clique_edges(0, k);
        e.extend((k - 1..k - 1 + tail).map(|v| (v, v + 1)));
        out.push((format!("lollipop-{k}-{tail}"), build(k + tail, e)));
    }
    for (a, b) in [(1, 4), (2, 3), (3, 3), (2, 6)] {
        let e = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).collect();
        out.push((format!("bipartite-{a}-{b}"), build(a + b, e)));
    }
    let mut e = clique_edges(0, 4);
    e.extend((0..5).map(|i| (4 + i, 4 + (i + 1) % 5)));
    out.push(("union-k4-c5".into(), build(9, e)));
    let mut e = clique_edges(0, 3);
    e.extend(clique_edges(3, 3));
    out.push(("union-k3-k3".into(), build(6, e)));
    let mut e = clique_edges(0, 3);
    e.extend(clique_edges(3, 3));
    e.push((2, 3));
    out.push(("two-triangles-bridge".into(), build(6, e)));
    out.push((
        "k4-minus-edge".into(),
        build(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
    ));
    out.push((
        "triangle-pendant".into(),
        build(4, vec![(0, 1), (1, 2), (0, 2), (2, 3)]),
    ));
    out.push(("path-5".into(), build(5, (0..4).map(|v| (v, v + 1)).collect())));
    out.push(("star-6".into(), build(7, (1..7).map(|v| (0, v)).collect())));
    out.push(("two-clique-4".into(), gen_two_clique(4, 0.5, 3).expect("valid")));
    out
}

/// Named small digraphs (`n ≤ 7`): `random` seeded random digraphs plus
/// cycles, stars and complete digraphs.
pub fn small_dds_corpus(random: usize) -> Vec<(String, DirectedGraph)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < random {
        let n = 2 + (seed % 6) as usize;
        let p = [0.25, 0.4, 0.6][(seed / 6 % 3) as usize];
        let d = gen_digraph(n, p, 1000 + seed).expect("valid probability");
        if d.m() > 0 {
            out.push((format!("digraph-n{n}-p{p}-s{seed}"), d));
        }
        seed += 1;
    }
    let build = |n: usize, arcs: Vec<(usize, usize)>| DirectedGraph::from_edges(n, arcs).expect("ids in range");
    out.push(("arc".into(), build(2, vec![(0, 1)])));
    out.push(("two-cycle".into(), build(2, vec![(0, 1), (1, 0)])));
    out.push(("cycle-3".into(), build(3, vec![(0, 1), (1, 2), (2, 0)])));
    out.push(("out-star-4".into(), build(5, (1..5).map(|v| (0, v)).collect())));
    out.push(("in-star-4".into(), build(5, (1..5).map(|v| (v, 0)).collect())));
    for k in 3..=5 {
        let arcs = (0..k)
            .flat_map(|u| (0..k).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        out.push((format!("complete-{k}"), build(k, arcs)));
    }
    out.push((
        "bipartite-2-5".into(),
        build(7, (0..2).flat_map(|u| (2..7).map(move |v| (u, v))).collect()),
    ));
    out
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(DsdError::InvalidParameter(format!(
            "probability must lie in [0, 1], got {p}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_clique_shape() {
        let g = gen_two_clique(4, 0.0, 1).unwrap();
        assert_eq!((g.n(), g.m()), (8, 13));
        for seed in 0..5 {
            let g = gen_two_clique(4, 0.5, seed).unwrap();
            assert_eq!(g.edges_within(&[4, 5, 6, 7]).unwrap(), 3);
        }
        assert_eq!(
            gen_two_clique(20, 0.01, 7).unwrap(),
            gen_two_clique(20, 0.01, 7).unwrap()
        );
        assert!(gen_two_clique(2, 0.0, 0).is_err());
        assert!(gen_two_clique(5, 1.0, 0).is_err());
    }

    #[test]
    fn seeded() {
        assert_eq!(gen_gnp(30, 0.2, 3).unwrap(), gen_gnp(30, 0.2, 3).unwrap());
        assert_eq!(gen_digraph(10, 0.3, 3).unwrap(), gen_digraph(10, 0.3, 3).unwrap());
        let pl = gen_power_law(300, 6.0, 2.5, 9).unwrap();
        assert!(pl.m() > 300);
    }

    #[test]
    fn corpora_fit_the_oracles() {
        let u = small_uds_corpus(50);
        assert!(u.len() >= 70);
        assert!(u.iter().all(|(_, g)| g.n() <= 12 && g.m() > 0));
        let d = small_dds_corpus(30);
        assert!(d.iter().all(|(_, g)| g.n() <= 7 && g.m() > 0));
    }
}
