use dsd_core::{
    brute_force_dds, brute_force_uds, run_dds, run_uds, DdsAlgo, DdsConfig, DirectedGraph, UdsAlgo, UdsConfig,
    UndirectedGraph,
};

fn k4_minus_edge() -> UndirectedGraph {
    UndirectedGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

fn directed_anchors() -> Vec<DirectedGraph> {
    let complete3 = (0..3).flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)));
    vec![
        DirectedGraph::from_edges(5, (1..5).map(|v| (0, v))).unwrap(),
        DirectedGraph::from_edges(3, complete3).unwrap(),
    ]
}

#[test]
fn undirected_five_quarters() {
    let g = k4_minus_edge();
    let oracle = brute_force_uds(&g).unwrap();
    assert_eq!(oracle.density, 1.25);
    for algo in UdsAlgo::ALL.iter().filter(|a| a.is_exact()) {
        let res = run_uds(&g, &UdsConfig::new(*algo)).unwrap();
        assert_eq!(res.density, 1.25, "{algo}");
        assert_eq!(res.s, vec![0, 1, 2, 3], "{algo}");
        assert!(res.verified, "{algo}");
    }
}

#[test]
fn directed_two() {
    for d in directed_anchors() {
        assert!((brute_force_dds(&d).unwrap().density - 2.0).abs() < 1e-12);
        for algo in DdsAlgo::ALL.iter().filter(|a| a.is_exact()) {
            let res = run_dds(&d, &DdsConfig::new(*algo)).unwrap();
            assert!((res.density - 2.0).abs() < 1e-9, "{algo}: {}", res.density);
            assert!(res.verified, "{algo}");
        }
    }
}
