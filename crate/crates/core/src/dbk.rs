//! Decomposition, bounds and k-core (DBK): exact maximum clique by recursive
//! vertex splitting, delegating subgraphs of at most `cutoff` vertices to a
//! pluggable subsolver.
//!
//! Splitting at `v` yields the subgraph induced by `N(v)` (with `v` recorded
//! as extracted) and the graph with `v` deleted. A maximum clique either
//! contains `v`, and then lives in the first child, or it survives in the
//! second. Every subproblem carries the set of vertices extracted along its
//! branch; any clique of the subproblem's graph joined with that set is a
//! clique of the input graph. Bounds and k-core orders are therefore always
//! taken relative to `k - |extracted|`.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{greedy_clique_lower_bound, k_core, upper_bound};
use crate::error::{Error, Result};
use crate::exact::max_clique_exact;
use crate::graph::{Graph, VertexId, VertexSet};
use crate::metrics::SubgraphRunRecord;
use crate::qubo::extract_clique;

#[derive(Debug, Clone, PartialEq)]
pub struct SubProblem {
    pub graph: Graph,
    pub extracted: VertexSet,
}

impl SubProblem {
    pub fn root(graph: Graph) -> Self {
        SubProblem { graph, extracted: VertexSet::new() }
    }

    pub fn offset(&self) -> usize {
        self.extracted.len()
    }
}

/// Splits at `v` into (neighborhood of `v` with `v` extracted, `p` without `v`).
pub fn split(p: &SubProblem, v: VertexId) -> Result<(SubProblem, SubProblem)> {
    let neighborhood: VertexSet = p.graph.neighbors(v)?.collect();
    let mut extracted = p.extracted.clone();
    extracted.insert(v);
    let with_v = SubProblem { graph: p.graph.induced_subgraph(&neighborhood)?, extracted };
    let without_v = SubProblem { graph: p.graph.remove_vertex(v)?, extracted: p.extracted.clone() };
    Ok((with_v, without_v))
}

/// What a subsolver hands back for one subgraph.
#[derive(Debug, Clone, Default)]
pub struct SubsolverOutput {
    pub clique: VertexSet,
    /// Sampling statistics, for sampling-based subsolvers.
    pub run: Option<SubgraphRunRecord>,
}

pub trait Subsolver {
    fn solve(&mut self, g: &Graph) -> Result<SubsolverOutput>;
}

impl<F> Subsolver for F
where
    F: FnMut(&Graph) -> VertexSet,
{
    fn solve(&mut self, g: &Graph) -> Result<SubsolverOutput> {
        Ok(SubsolverOutput { clique: self(g), run: None })
    }
}

/// Exact branch-and-bound subsolver.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSubsolver;

impl Subsolver for ExactSubsolver {
    fn solve(&mut self, g: &Graph) -> Result<SubsolverOutput> {
        Ok(SubsolverOutput { clique: max_clique_exact(g).clique, run: None })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbkConfig {
    /// Subgraphs with at most this many vertices go to the subsolver.
    pub cutoff: usize,
    pub record_trace: bool,
}

impl DbkConfig {
    pub fn new(cutoff: usize) -> Self {
        DbkConfig { cutoff, record_trace: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// Larger than the cutoff; queued for further splitting.
    Pushed,
    /// Handed to the subsolver.
    Solved,
    /// Bound could not beat the incumbent.
    Pruned,
    /// Already complete, so its vertices are taken directly.
    CliqueShortcut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: usize,
    pub size: usize,
    pub density: f64,
    pub extracted_count: usize,
    pub action: Action,
    /// Incumbent clique size after handling this subproblem.
    pub k: usize,
    /// Seconds since the start of the run.
    pub elapsed: f64,
    /// Seconds spent in the subsolver for this subproblem.
    pub solve_time: f64,
    pub vertices: Vec<VertexId>,
    pub extracted: Vec<VertexId>,
}

/// One subsolver call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphRecord {
    pub size: usize,
    pub density: f64,
    pub extracted: usize,
    /// Size of the clique the subsolver returned (after any repair).
    pub returned_size: usize,
    /// Whether the returned set had to be repaired into a clique.
    pub repaired: bool,
    pub solve_time: f64,
    pub run: Option<SubgraphRunRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbkResult {
    pub clique: VertexSet,
    pub size: usize,
    /// Number of subsolver calls.
    pub subgraph_count: usize,
    pub subgraphs: Vec<SubgraphRecord>,
    /// Wall time of the decomposition itself, excluding subsolver calls.
    pub dbk_proc_time: f64,
    pub subsolver_time: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEvent>,
}

impl DbkResult {
    pub fn write_trace_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for event in &self.trace {
            serde_json::to_writer(&mut out, event)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

struct Run<'a, S: Subsolver + ?Sized> {
    cfg: DbkConfig,
    subsolver: &'a mut S,
    started: Instant,
    k: usize,
    witness: VertexSet,
    subgraphs: Vec<SubgraphRecord>,
    subsolver_time: f64,
    trace: Vec<TraceEvent>,
}

impl<S: Subsolver + ?Sized> Run<'_, S> {
    fn improve(&mut self, clique: &VertexSet, extracted: &VertexSet) {
        if clique.len() + extracted.len() > self.k {
            self.witness = clique.union(extracted).copied().collect();
            self.k = self.witness.len();
        }
    }

    fn record(&mut self, p: &SubProblem, action: Action, solve_time: f64) {
        if !self.cfg.record_trace {
            return;
        }
        self.trace.push(TraceEvent {
            step: self.trace.len(),
            size: p.graph.vertex_count(),
            density: p.graph.density(),
            extracted_count: p.offset(),
            action,
            k: self.k,
            elapsed: self.started.elapsed().as_secs_f64(),
            solve_time,
            vertices: p.graph.vertices().to_vec(),
            extracted: p.extracted.iter().copied().collect(),
        });
    }

    /// Handles a subproblem no larger than the cutoff.
    fn settle(&mut self, p: &SubProblem) -> Result<()> {
        let g = &p.graph;
        if g.is_complete() {
            self.improve(&g.vertex_set(), &p.extracted);
            self.record(p, Action::CliqueShortcut, 0.0);
            return Ok(());
        }
        if upper_bound(g) + p.offset() <= self.k {
            self.record(p, Action::Pruned, 0.0);
            return Ok(());
        }
        let t0 = Instant::now();
        let out = self.subsolver.solve(g)?;
        let solve_time = t0.elapsed().as_secs_f64();
        self.subsolver_time += solve_time;

        let valid = out.clique.iter().all(|&v| g.contains(v)) && g.is_clique(&out.clique).unwrap_or(false);
        let clique = if valid {
            out.clique
        } else {
            log::warn!("subsolver returned a non-clique of size {}; repairing", out.clique.len());
            let x = g.vertices().iter().map(|&v| (v, u8::from(out.clique.contains(&v)))).collect();
            extract_clique(g, &x)
        };
        self.subgraphs.push(SubgraphRecord {
            size: g.vertex_count(),
            density: g.density(),
            extracted: p.offset(),
            returned_size: clique.len(),
            repaired: !valid,
            solve_time,
            run: out.run,
        });
        self.improve(&clique, &p.extracted);
        self.record(p, Action::Solved, solve_time);
        Ok(())
    }
}

/// Runs DBK on `g`, returning a maximum clique whenever `subsolver` is exact.
pub fn dbk_solve<S: Subsolver + ?Sized>(g: &Graph, cfg: &DbkConfig, subsolver: &mut S) -> Result<DbkResult> {
    if cfg.cutoff == 0 {
        return Err(Error::InvalidCutoff);
    }
    let witness = greedy_clique_lower_bound(g);
    let mut run = Run {
        cfg: *cfg,
        subsolver,
        started: Instant::now(),
        k: witness.len(),
        witness,
        subgraphs: Vec::new(),
        subsolver_time: 0.0,
        trace: Vec::new(),
    };

    let root = SubProblem::root(k_core(g, run.k));
    let mut stack = Vec::new();
    if root.graph.vertex_count() > cfg.cutoff {
        run.record(&root, Action::Pushed, 0.0);
        stack.push(root);
    } else if !root.graph.is_empty() {
        run.settle(&root)?;
    }

    while let Some(p) = stack.pop() {
        let v = p.graph.lowest_degree_vertex()?;
        let (with_v, without_v) = split(&p, v)?;
        for mut child in [with_v, without_v] {
            assert!(child.graph.vertex_count() < p.graph.vertex_count());
            child.graph = k_core(&child.graph, run.k.saturating_sub(child.offset()));
            let lower = greedy_clique_lower_bound(&child.graph);
            run.improve(&lower, &child.extracted);
            if child.graph.vertex_count() > cfg.cutoff {
                run.record(&child, Action::Pushed, 0.0);
                stack.push(child);
            } else {
                run.settle(&child)?;
            }
        }
    }

    let total = run.started.elapsed().as_secs_f64();
    debug_assert!(g.is_clique(&run.witness).unwrap_or(false));
    Ok(DbkResult {
        size: run.k,
        clique: run.witness,
        subgraph_count: run.subgraphs.len(),
        subgraphs: run.subgraphs,
        dbk_proc_time: (total - run.subsolver_time).max(0.0),
        subsolver_time: run.subsolver_time,
        trace: run.trace,
    })
}
