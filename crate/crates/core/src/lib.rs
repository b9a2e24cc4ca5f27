//! Densest subgraph discovery on undirected and directed graphs: exact
//! and approximate solvers built from graph reduction, vertex weight
//! updates and candidate extraction with verification.

pub mod cores;
pub mod cp;
pub mod dds;
pub mod error;
mod exact;
pub mod flow;
pub mod framework;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod peeling;
mod result;
pub mod verify;

pub use cp::{Method, Schedule, StopRule, Strategy};
pub use error::{DsdError, Result};
pub use framework::{run_dds, run_uds, DdsAlgo, DdsConfig, Reduction, UdsAlgo, UdsConfig};
pub use graph::{load_edge_list, AnyGraph, DirectedGraph, Loaded, UndirectedGraph};
pub use oracle::{brute_force_dds, brute_force_uds};
pub use result::{DensityBounds, DsResult, RunStats};
