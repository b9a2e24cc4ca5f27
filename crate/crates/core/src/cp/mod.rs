//! Iterative vertex-weight-update solvers for the convex programs of the
//! undirected problem and of the directed problem at a fixed ratio `c`.

mod dds;
mod uds;

pub use dds::{init_state_dds, vwu_step_dds, DdsState};
pub(crate) use dds::{solve_ratio_cp, RatioCpMode};
pub use uds::{fista_step, init_state_uds, solve_cp_uds, vwu_step, Checkpoint, CpOutcome, Momentum, UdsState};

use std::str::FromStr;

use crate::error::DsdError;

/// Default iteration cap for exact stop rules.
pub const DEFAULT_ITER_CAP: u64 = 1_000_000;

/// First checkpoint; later checkpoints double.
pub const FIRST_CHECKPOINT: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FrankWolfe,
    Mwu,
    Fista,
}

/// Whether refreshed weights become visible within one sweep over the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Sequential,
    Simultaneous,
}

impl FromStr for Strategy {
    type Err = DsdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" => Ok(Strategy::Sequential),
            "simultaneous" => Ok(Strategy::Simultaneous),
            other => Err(DsdError::InvalidParameter(format!("unknown strategy `{other}`"))),
        }
    }
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Sequential => "sequential",
            Strategy::Simultaneous => "simultaneous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub method: Method,
    pub strategy: Strategy,
}

impl Schedule {
    pub fn new(method: Method, strategy: Strategy) -> Self {
        Self { method, strategy }
    }

    /// `γ_t = 2/(t+2)` for Frank-Wolfe and `1/(t+1)` for MWU.
    pub fn gamma(&self, t: u64) -> f64 {
        match self.method {
            Method::FrankWolfe => 2.0 / (t as f64 + 2.0),
            Method::Mwu | Method::Fista => 1.0 / (t as f64 + 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run exactly this many iterations.
    Iters(u64),
    /// Stop once `ρ̄ ≤ (1 + eps) ρ(S)`.
    TargetRatio(f64),
    /// Stop once the candidate is certified optimal.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CpOptions {
    /// Re-reduce to the (⌊ρ̲⌋ + 1)-core whenever the lower bound improves,
    /// and to a checkpoint candidate that passes the rerouted stability test.
    pub multi_reduction: bool,
    /// Hard iteration limit; defaults to [`DEFAULT_ITER_CAP`].
    pub iter_cap: Option<u64>,
}
