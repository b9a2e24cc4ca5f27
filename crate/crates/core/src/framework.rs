//! Top-level dispatch: graph reduction, weight updates and extraction wired
//! together per algorithm name.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::cores::{ceil_threshold, core_numbers};
use crate::cp::{solve_cp_uds, CpOptions, Method, Schedule, StopRule, Strategy};
use crate::dds::{dds_flow_exact, divide_and_conquer, DdsStrategy, PerRatioSolver};
use crate::error::{DsdError, Result};
use crate::flow::{uds_flow_approx, uds_flow_exact, FlowReduction};
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::peeling::{core_app, d_greedy, greedy, greedy_pp_with, w_core_app, xy_core_app};
use crate::result::DsResult;

/// Default ε for approximation algorithms run without `eps`.
pub const DEFAULT_EPS: f64 = 0.1;
/// Default number of Greedy++ rounds.
pub const DEFAULT_GREEDY_PP_ROUNDS: u64 = 8;

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl FromStr for $name {
            type Err = DsdError;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(DsdError::UnknownAlgorithm(other.to_string())),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

named_enum!(
    /// Undirected algorithms.
    UdsAlgo {
        FlowExact => "flow_exact",
        CoreExact => "core_exact",
        FwExact => "fw_exact",
        MwuExact => "mwu_exact",
        FistaExact => "fista_exact",
        Greedy => "greedy",
        GreedyPp => "greedy_pp",
        CoreApp => "core_app",
        FwApp => "fw_app",
        MwuApp => "mwu_app",
        FistaApp => "fista_app",
        FlowApp => "flow_app",
        GreedyM => "greedy_m",
    }
);

named_enum!(
    /// Directed algorithms.
    DdsAlgo {
        DflowExact => "dflow_exact",
        DcExact => "dc_exact",
        DfwExact => "dfw_exact",
        Dgreedy => "dgreedy",
        XycoreApp => "xycore_app",
        WcoreApp => "wcore_app",
        DfwApp => "dfw_app",
    }
);

impl UdsAlgo {
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            UdsAlgo::FlowExact | UdsAlgo::CoreExact | UdsAlgo::FwExact | UdsAlgo::MwuExact | UdsAlgo::FistaExact
        )
    }

    /// Whether `eps` changes the algorithm's target.
    pub fn takes_eps(&self) -> bool {
        matches!(
            self,
            UdsAlgo::FwApp | UdsAlgo::MwuApp | UdsAlgo::FistaApp | UdsAlgo::FlowApp
        )
    }

    fn cp_method(&self) -> Option<Method> {
        match self {
            UdsAlgo::FwExact | UdsAlgo::FwApp => Some(Method::FrankWolfe),
            UdsAlgo::MwuExact | UdsAlgo::MwuApp => Some(Method::Mwu),
            UdsAlgo::FistaExact | UdsAlgo::FistaApp => Some(Method::Fista),
            _ => None,
        }
    }
}

impl DdsAlgo {
    pub fn is_exact(&self) -> bool {
        matches!(self, DdsAlgo::DflowExact | DdsAlgo::DcExact | DdsAlgo::DfwExact)
    }

    pub fn takes_eps(&self) -> bool {
        *self == DdsAlgo::DfwApp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    None,
    /// Reduce once to the ⌈k*/2⌉-core before solving.
    Single,
    /// Re-reduce whenever the lower bound improves.
    #[default]
    Multi,
}

impl Reduction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reduction::None => "none",
            Reduction::Single => "single",
            Reduction::Multi => "multi",
        }
    }
}

impl FromStr for Reduction {
    type Err = DsdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Reduction::None),
            "single" => Ok(Reduction::Single),
            "multi" => Ok(Reduction::Multi),
            other => Err(DsdError::InvalidParameter(format!("unknown reduction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UdsConfig {
    pub algo: UdsAlgo,
    pub eps: Option<f64>,
    pub reduction: Reduction,
    pub strategy: Strategy,
    /// Fixed iteration count for CP methods, rounds for Greedy++, blocking
    /// phases per guess for FlowApp.
    pub iters: Option<u64>,
    /// Safety cap on CP iterations.
    pub iter_cap: Option<u64>,
}

impl UdsConfig {
    pub fn new(algo: UdsAlgo) -> Self {
        Self {
            algo,
            eps: None,
            reduction: Reduction::default(),
            strategy: Strategy::default(),
            iters: None,
            iter_cap: None,
        }
    }

    /// The ε actually used, if the algorithm takes one.
    pub fn effective_eps(&self) -> Option<f64> {
        if self.algo.takes_eps() {
            Some(self.eps.unwrap_or(DEFAULT_EPS))
        } else {
            self.eps
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DdsConfig {
    pub algo: DdsAlgo,
    pub eps: Option<f64>,
    pub gamma: f64,
    pub adjust_intervals: bool,
    pub strategy: Strategy,
    pub iter_cap: Option<u64>,
}

impl DdsConfig {
    pub fn new(algo: DdsAlgo) -> Self {
        Self {
            algo,
            eps: None,
            gamma: 0.0,
            adjust_intervals: true,
            strategy: Strategy::default(),
            iter_cap: None,
        }
    }

    pub fn effective_eps(&self) -> Option<f64> {
        if self.algo.takes_eps() {
            Some(self.eps.unwrap_or(DEFAULT_EPS))
        } else {
            self.eps
        }
    }
}

fn check_eps(exact: bool, name: &str, eps: Option<f64>) -> Result<()> {
    match eps {
        Some(_) if exact => Err(DsdError::Incompatible(format!("`{name}` is exact and takes no eps"))),
        Some(e) if !(e > 0.0 && e.is_finite()) => {
            Err(DsdError::InvalidParameter(format!("eps must be positive, got {e}")))
        }
        _ => Ok(()),
    }
}

/// Runs one undirected algorithm.
pub fn run_uds(g: &UndirectedGraph, cfg: &UdsConfig) -> Result<DsResult> {
    check_eps(cfg.algo.is_exact(), cfg.algo.as_str(), cfg.eps)?;
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    if cfg.reduction != Reduction::Single || cfg.algo == UdsAlgo::CoreExact {
        return solve_uds(g, cfg, cfg.reduction == Reduction::Multi);
    }
    let start = Instant::now();
    let cores = core_numbers(g);
    let keep = cores.k_core(ceil_threshold(cores.k_star as f64 / 2.0));
    let sub = g.induced_subgraph(&keep)?;
    let inner = solve_uds(&sub.graph, cfg, false)?;
    let mut res = DsResult::undirected(g, sub.lift(&inner.s))?;
    res.verified = inner.verified;
    res.stats = inner.stats;
    if sub.graph.m() < g.m() {
        res.stats.reductions += 1;
        res.stats.edge_trace.insert(0, g.m());
    }
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

fn solve_uds(g: &UndirectedGraph, cfg: &UdsConfig, multi: bool) -> Result<DsResult> {
    let eps = cfg.effective_eps();
    let cp = |method: Method, stop: StopRule| -> Result<DsResult> {
        let stop = match cfg.iters {
            Some(t) => StopRule::Iters(t),
            None => stop,
        };
        let opts = CpOptions {
            multi_reduction: multi,
            iter_cap: cfg.iter_cap,
        };
        Ok(solve_cp_uds(g, Schedule::new(method, cfg.strategy), stop, &opts)?.result)
    };
    let rounds = cfg.iters.unwrap_or(DEFAULT_GREEDY_PP_ROUNDS) as usize;
    match cfg.algo {
        UdsAlgo::FlowExact => uds_flow_exact(
            g,
            if multi {
                FlowReduction::Multi
            } else {
                FlowReduction::None
            },
        ),
        UdsAlgo::CoreExact => uds_flow_exact(g, FlowReduction::Multi),
        UdsAlgo::FwExact | UdsAlgo::MwuExact | UdsAlgo::FistaExact => {
            cp(cfg.algo.cp_method().unwrap(), StopRule::Exact)
        }
        UdsAlgo::FwApp | UdsAlgo::MwuApp | UdsAlgo::FistaApp => {
            cp(cfg.algo.cp_method().unwrap(), StopRule::TargetRatio(eps.unwrap()))
        }
        UdsAlgo::FlowApp => uds_flow_approx(g, eps.unwrap(), cfg.iters.map(|h| h as usize)),
        UdsAlgo::Greedy => greedy(g),
        UdsAlgo::GreedyPp => greedy_pp_with(g, rounds, multi),
        UdsAlgo::GreedyM => greedy_pp_with(g, rounds, true),
        UdsAlgo::CoreApp => core_app(g),
    }
}

/// Runs one directed algorithm.
pub fn run_dds(d: &DirectedGraph, cfg: &DdsConfig) -> Result<DsResult> {
    check_eps(cfg.algo.is_exact(), cfg.algo.as_str(), cfg.eps)?;
    if !(0.0..=1.0).contains(&cfg.gamma) {
        return Err(DsdError::InvalidParameter(format!(
            "gamma must lie in [0, 1], got {}",
            cfg.gamma
        )));
    }
    if d.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let fw = PerRatioSolver::FrankWolfe {
        schedule: Schedule::new(Method::FrankWolfe, cfg.strategy),
        iter_cap: cfg.iter_cap,
    };
    match cfg.algo {
        DdsAlgo::DflowExact => dds_flow_exact(d, DdsStrategy::EnumerateAll, cfg.gamma),
        DdsAlgo::DcExact => divide_and_conquer(d, PerRatioSolver::Flow { gamma: cfg.gamma }, 0.0, cfg.adjust_intervals),
        DdsAlgo::DfwExact => divide_and_conquer(d, fw, 0.0, cfg.adjust_intervals),
        DdsAlgo::DfwApp => divide_and_conquer(d, fw, cfg.effective_eps().unwrap(), cfg.adjust_intervals),
        DdsAlgo::Dgreedy => d_greedy(d),
        DdsAlgo::XycoreApp => xy_core_app(d),
        DdsAlgo::WcoreApp => w_core_app(d),
    }
}
