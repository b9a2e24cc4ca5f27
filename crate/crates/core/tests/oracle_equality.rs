use dsd_core::generate::{small_dds_corpus, small_uds_corpus};
use dsd_core::{brute_force_dds, brute_force_uds, run_dds, run_uds, DdsAlgo, DdsConfig, Reduction, UdsAlgo, UdsConfig};

const UDS_EXACT: [UdsAlgo; 5] = [
    UdsAlgo::FlowExact,
    UdsAlgo::CoreExact,
    UdsAlgo::FwExact,
    UdsAlgo::MwuExact,
    UdsAlgo::FistaExact,
];

#[test]
fn exact_uds_matches_brute_force() {
    for (name, g) in small_uds_corpus(50) {
        let oracle = brute_force_uds(&g).unwrap();
        for algo in UDS_EXACT {
            for reduction in [Reduction::None, Reduction::Single, Reduction::Multi] {
                let mut cfg = UdsConfig::new(algo);
                cfg.reduction = reduction;
                let res = run_uds(&g, &cfg).unwrap();
                // Densities are e/s with s ≤ 12, so equal fractions give equal floats.
                assert_eq!(res.density, oracle.density, "{name} {algo} {reduction:?}");
                assert_eq!(g.density_of(&res.s).unwrap(), res.density, "{name} {algo}");
                assert!(res.verified, "{name} {algo} {reduction:?} not verified");
            }
        }
    }
}

#[test]
fn exact_dds_matches_brute_force() {
    for (name, d) in small_dds_corpus(30) {
        let oracle = brute_force_dds(&d).unwrap();
        for algo in [DdsAlgo::DflowExact, DdsAlgo::DcExact, DdsAlgo::DfwExact] {
            for adjust in [true, false] {
                let mut cfg = DdsConfig::new(algo);
                cfg.adjust_intervals = adjust;
                let res = run_dds(&d, &cfg).unwrap();
                assert!(
                    (res.density - oracle.density).abs() < 1e-9,
                    "{name} {algo} adjust={adjust}: {} vs {}",
                    res.density,
                    oracle.density
                );
                assert!(res.verified, "{name} {algo} not verified");
                assert!(res.stats.ratios_probed <= dsd_core::dds::candidate_ratios(d.n()).len());
            }
        }
        let mut cfg = DdsConfig::new(DdsAlgo::DcExact);
        cfg.gamma = 1.0;
        assert!(
            (run_dds(&d, &cfg).unwrap().density - oracle.density).abs() < 1e-9,
            "{name} gamma=1"
        );
    }
}
