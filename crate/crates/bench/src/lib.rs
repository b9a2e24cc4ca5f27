//! Fixed benchmark inputs shared by the criterion benches.

use dsd_core::generate::{gen_digraph, gen_power_law, gen_two_clique};
use dsd_core::{DirectedGraph, UndirectedGraph};

/// Undirected inputs: the two-clique stress case and a power-law graph.
pub fn undirected_fixtures() -> Vec<(&'static str, UndirectedGraph)> {
    vec![
        ("two-clique-30", gen_two_clique(30, 0.3, 1).expect("valid parameters")),
        (
            "power-law-2000",
            gen_power_law(2000, 8.0, 2.3, 1).expect("valid parameters"),
        ),
    ]
}

pub fn directed_fixtures() -> Vec<(&'static str, DirectedGraph)> {
    vec![("digraph-40", gen_digraph(40, 0.15, 1).expect("valid probability"))]
}
