use dsd_core::cp::{solve_cp_uds, CpOptions};
use dsd_core::generate::{gen_power_law, gen_two_clique, small_uds_corpus};
use dsd_core::{brute_force_uds, run_uds, Method, Reduction, Schedule, StopRule, Strategy, UdsAlgo, UdsConfig};

#[test]
fn sandwich_closes_on_the_corpus() {
    let opts = CpOptions {
        multi_reduction: true,
        iter_cap: Some(100_000),
    };
    for (name, g) in small_uds_corpus(50) {
        let opt = brute_force_uds(&g).unwrap().density;
        for method in [Method::FrankWolfe, Method::Mwu, Method::Fista] {
            let schedule = Schedule::new(method, Strategy::Sequential);
            let out = solve_cp_uds(&g, schedule, StopRule::TargetRatio(1e-8), &opts).unwrap();
            let last = out.checkpoints.last().unwrap();
            assert!(
                last.upper - last.lower < 1e-6,
                "{name} {method:?}: {} {}",
                last.upper,
                last.lower
            );
            assert!(last.iteration <= 100_000);
            for cp in &out.checkpoints {
                assert!(cp.lower <= cp.upper + 1e-12, "{name} {method:?} at {}", cp.iteration);
                assert!(cp.upper >= opt - 1e-12 && cp.lower <= opt + 1e-12, "{name} {method:?}");
            }
        }
    }
}

#[test]
fn multi_reduction_shrinks_cp_input() {
    let mut graphs: Vec<_> = (0..5).map(|s| gen_two_clique(30, 0.3, s).unwrap()).collect();
    graphs.extend((0..3).map(|s| gen_power_law(1500, 8.0, 2.3, s).unwrap()));
    for g in graphs {
        let mut cfg = UdsConfig::new(UdsAlgo::FwExact);
        let multi = run_uds(&g, &cfg).unwrap();
        cfg.reduction = Reduction::None;
        let none = run_uds(&g, &cfg).unwrap();
        assert_eq!(multi.density, none.density);
        assert!(multi.stats.edge_trace[1] < g.m(), "{:?}", multi.stats.edge_trace);
        assert!(multi.stats.edge_trace.windows(2).all(|w| w[1] < w[0]));
    }
}
