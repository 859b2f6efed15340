use anyhow::{ensure, Result};
use dbk_core::anneal::{AnnealSettings, AnnealSubsolver};
use dbk_core::dbk::{dbk_solve, DbkConfig, DbkResult, ExactSubsolver, Subsolver};
use dbk_core::exact::max_clique_exact;
use dbk_core::metrics::{summarize_run, RunSummary};
use dbk_core::Graph;
use serde::{Deserialize, Serialize};

use crate::config::Backend;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub backend: Backend,
    pub cutoff: usize,
    pub sampler: AnnealSettings,
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub options: SolveOptions,
    pub result: DbkResult,
    /// Exact clique number of each solved subgraph.
    pub ground_truth: Vec<usize>,
    pub summary: RunSummary,
}

/// Subsolver for `backend`. Annealing layouts are sized for
/// `min(cutoff, n)`, since no subgraph of an `n`-vertex graph is larger.
pub fn make_subsolver(
    backend: Backend,
    cutoff: usize,
    n: usize,
    sampler: AnnealSettings,
) -> Result<Box<dyn Subsolver>> {
    Ok(match backend {
        Backend::Exact => Box::new(ExactSubsolver),
        Backend::Sa | Backend::ParallelSa => {
            let size = cutoff.min(n).max(1);
            Box::new(AnnealSubsolver::new(sampler, size, backend == Backend::ParallelSa)?)
        }
    })
}

pub fn solve_graph(g: &Graph, opts: &SolveOptions) -> Result<SolveOutput> {
    ensure!(opts.cutoff >= 1, "cutoff must be positive");
    let mut subsolver = make_subsolver(opts.backend, opts.cutoff, g.vertex_count(), opts.sampler)?;
    let cfg = DbkConfig { cutoff: opts.cutoff, record_trace: opts.trace };
    let result = dbk_solve(g, &cfg, subsolver.as_mut())?;
    ensure!(g.is_clique(&result.clique)?, "solver returned a set that is not a clique");
    // Exact subgraph solves are their own ground truth.
    let ground_truth: Vec<usize> = result
        .subgraphs
        .iter()
        .map(|s| s.run.as_ref().and_then(|r| r.ground_truth_size).unwrap_or(s.returned_size))
        .collect();
    let summary = summarize_run(&result, &ground_truth);
    Ok(SolveOutput { options: *opts, result, ground_truth, summary })
}

/// Whether `out` holds a maximum clique of `g`, checked by the exact solver.
pub fn verify(g: &Graph, out: &SolveOutput) -> Result<bool> {
    Ok(g.is_clique(&out.result.clique)? && out.result.size == max_clique_exact(g).size)
}
