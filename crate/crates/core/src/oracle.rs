//! Exhaustive reference solvers for small graphs.

use std::cmp::Ordering;
use std::time::Instant;

use crate::error::{DsdError, Result};
use crate::exact::{cmp_directed, cmp_frac};
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::result::DsResult;

pub const UDS_ORACLE_LIMIT: usize = 20;
pub const DDS_ORACLE_LIMIT: usize = 8;

/// Densest subset by enumerating all `2^n − 1` nonempty subsets. Edge
/// counts come from a table filled in subset order: the count for a mask
/// is the count without its lowest vertex plus that vertex's neighbours
/// inside the mask.
pub fn brute_force_uds(g: &UndirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    let n = g.n();
    if n > UDS_ORACLE_LIMIT {
        return Err(DsdError::TooLarge {
            n,
            limit: UDS_ORACLE_LIMIT,
        });
    }
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | 1 << u))
        .collect();
    let mut edges = vec![0u16; 1 << n];
    let mut best = (0u64, 1u64, 0u32);
    for mask in 1u32..(1u32 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let e = edges[rest as usize] + (adj[low] & rest).count_ones() as u16;
        edges[mask as usize] = e;
        let size = mask.count_ones() as u64;
        if cmp_frac(e as u64, size, best.0, best.1) == Ordering::Greater {
            best = (e as u64, size, mask);
        }
    }
    let set = (0..n).filter(|&v| best.2 >> v & 1 == 1).collect();
    let mut res = DsResult::undirected(g, set)?;
    res.verified = true;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

/// Densest pair by enumerating all pairs of nonempty subsets.
pub fn brute_force_dds(d: &DirectedGraph) -> Result<DsResult> {
    let start = Instant::now();
    let n = d.n();
    if n > DDS_ORACLE_LIMIT {
        return Err(DsdError::TooLarge {
            n,
            limit: DDS_ORACLE_LIMIT,
        });
    }
    if d.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let out: Vec<u32> = (0..n)
        .map(|v| d.out_neighbors(v).iter().fold(0u32, |acc, &u| acc | 1 << u))
        .collect();
    let mut best = (0u64, 1u64, 1u64, 0u32, 0u32);
    for s in 1u32..(1 << n) {
        for t in 1u32..(1 << n) {
            let e: u64 = (0..n)
                .filter(|&u| s >> u & 1 == 1)
                .map(|u| (out[u] & t).count_ones() as u64)
                .sum();
            let (ns, nt) = (s.count_ones() as u64, t.count_ones() as u64);
            if cmp_directed(e, ns, nt, best.0, best.1, best.2) == Ordering::Greater {
                best = (e, ns, nt, s, t);
            }
        }
    }
    let members = |mask: u32| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>();
    let mut res = DsResult::directed(d, members(best.3), members(best.4))?;
    res.verified = true;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let k4 = UndirectedGraph::from_edges(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v)))).unwrap();
        assert_eq!(brute_force_uds(&k4).unwrap().density, 1.5);
        let tp = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(brute_force_uds(&tp).unwrap().density, 1.0);
        let two_cycle = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(brute_force_dds(&two_cycle).unwrap().density, 1.0);
        let big = UndirectedGraph::from_edges(21, [(0, 20)]).unwrap();
        assert_eq!(
            brute_force_uds(&big).unwrap_err(),
            DsdError::TooLarge { n: 21, limit: 20 }
        );
    }
}
