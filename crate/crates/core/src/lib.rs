//! Exact maximum clique by decomposition, bounds and k-core reduction, with an
//! exact branch-and-bound subsolver and an emulated annealing subsolver.

pub mod anneal;
pub mod bounds;
pub mod dbk;
pub mod error;
pub mod exact;
pub mod graph;
pub mod metrics;
pub mod qubo;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId, VertexSet};
