//! Experiment harness: corpus generation, single-graph solves, resumable
//! sweeps over (graph, cutoff, repetition) cells, and CSV reporting.

pub mod config;
pub mod corpus;
pub mod experiment;
pub mod solve;
pub mod tts;

pub use config::{Backend, CorpusSpec, ExperimentConfig};

/// Process exit code when `--verify` finds a non-maximum result.
pub const EXIT_VERIFY_FAILED: i32 = 3;
