//! Max-flow engine and the flow-based densest-subgraph solvers.

mod dds;
mod maxflow;
mod uds;

pub use dds::build_dds_network;
pub(crate) use dds::{dds_denser_than, h_value, solve_ratio_flow, RatioSolution};
pub use maxflow::{max_flow, Capacity, FlowNetwork};
pub use uds::{build_uds_network, uds_flow_approx, uds_flow_exact, FlowReduction};
pub(crate) use uds::{denser_than, BestSet};
