use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::embedding::{pack_parallel_embeddings, ParallelLayout};
use super::hardware::{build_chimera, HardwareGraph};
use super::physical::{chain_strength_utc, embed_ising, DEFAULT_PREFACTOR};
use super::sampler::{sa_sample, EmulatedTiming, SaSchedule};
use super::unembed::decode_chains;
use crate::dbk::{Subsolver, SubsolverOutput};
use crate::error::{Error, Result};
use crate::exact::max_clique_exact;
use crate::graph::{Graph, VertexSet};
use crate::metrics::SubgraphRunRecord;
use crate::qubo::{build_mc_qubo, extract_clique, Assignment, DEFAULT_A, DEFAULT_B};
use crate::seed::derive_seed;

/// Stream index reserved for tie-breaking coins during decoding.
const DECODE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealSettings {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub chain_strength_prefactor: f64,
    pub hardware_m: usize,
    pub seed: u64,
}

impl Default for AnnealSettings {
    fn default() -> Self {
        let s = SaSchedule::default();
        AnnealSettings {
            num_reads: s.num_reads,
            sweeps: s.sweeps,
            beta_min: s.beta_min,
            beta_max: s.beta_max,
            chain_strength_prefactor: DEFAULT_PREFACTOR,
            hardware_m: 16,
            seed: 0,
        }
    }
}

impl AnnealSettings {
    pub fn schedule(&self) -> SaSchedule {
        SaSchedule { num_reads: self.num_reads, sweeps: self.sweeps, beta_min: self.beta_min, beta_max: self.beta_max }
    }
}

/// Decoded result of one read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadOutcome {
    pub read: usize,
    /// Logical assignment of the replica that gave the best clique.
    pub assignment: Assignment,
    pub clique: VertexSet,
    pub best_replica: usize,
    /// Some replica reached the target size in this read.
    pub hit: bool,
    /// Broken chains summed over all replicas.
    pub broken_chains: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub reads: Vec<ReadOutcome>,
    pub best_clique: VertexSet,
    pub target: Option<usize>,
    pub hits: usize,
    pub replicas: usize,
    pub physical_qubits: usize,
    pub chain_strength: f64,
    pub timing: EmulatedTiming,
}

impl SampleSet {
    pub fn mean_broken_chains(&self) -> f64 {
        if self.reads.is_empty() {
            return 0.0;
        }
        self.reads.iter().map(|r| r.broken_chains as f64).sum::<f64>() / self.reads.len() as f64
    }

    pub fn run_record(&self) -> SubgraphRunRecord {
        SubgraphRunRecord {
            reads: self.reads.len(),
            t_qpu: self.timing.t_qpu,
            t_unembed: self.timing.t_unembed,
            hits: self.hits,
            ground_truth_size: self.target,
            best_size: self.best_clique.len(),
            replicas: self.replicas,
            mean_broken_chains: self.mean_broken_chains(),
            chain_strength: self.chain_strength,
        }
    }

    /// One JSON object per read.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.reads {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Samples the clique QUBO of `g` on every replica of `layout` at once.
///
/// Each read is decoded replica by replica; the read keeps the largest clique
/// (lowest replica on ties) and counts as a hit when any replica reaches
/// `target`.
pub fn parallel_solve(
    hw: &HardwareGraph,
    g: &Graph,
    layout: &ParallelLayout,
    settings: &AnnealSettings,
    target: Option<usize>,
) -> Result<SampleSet> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let qubo = build_mc_qubo(g, DEFAULT_A, DEFAULT_B)?;
    let chain_strength = chain_strength_utc(&qubo, settings.chain_strength_prefactor);
    let phys = embed_ising(hw, &qubo.to_ising(), layout, chain_strength)?;
    let samples = sa_sample(&phys, &settings.schedule(), settings.seed)?;
    let decode_seed = derive_seed(settings.seed, DECODE_STREAM);

    let mut set = SampleSet {
        reads: Vec::with_capacity(samples.len()),
        best_clique: VertexSet::new(),
        target,
        hits: 0,
        replicas: phys.replicas.len(),
        physical_qubits: phys.len(),
        chain_strength,
        timing: samples.timing,
    };
    for (read, state) in samples.states.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(decode_seed);
        rng.set_stream(read as u64);
        let mut best: Option<(VertexSet, usize, Assignment)> = None;
        let mut hit = false;
        let mut broken_chains = 0;
        for (r, replica) in phys.replicas.iter().enumerate() {
            let (logical, broken) = decode_chains(state, &replica.chains, &mut rng);
            broken_chains += broken;
            let assignment: Assignment =
                phys.variables.iter().zip(&logical).map(|(&v, &s)| (v, u8::from(s > 0))).collect();
            let clique = extract_clique(g, &assignment);
            hit |= target.is_some_and(|t| clique.len() >= t);
            if best.as_ref().is_none_or(|(b, _, _)| clique.len() > b.len()) {
                best = Some((clique, r, assignment));
            }
        }
        let (clique, best_replica, assignment) = best.expect("layout has at least one replica");
        if clique.len() > set.best_clique.len() {
            set.best_clique = clique.clone();
        }
        set.hits += usize::from(hit);
        set.reads.push(ReadOutcome {
            read,
            assignment,
            clique,
            best_replica,
            hit,
            broken_chains,
            energy: samples.energies[read],
        });
    }
    Ok(set)
}

/// DBK subsolver backed by the emulated annealer.
///
/// Every subgraph is placed on the same cutoff-sized layout; slots beyond the
/// subgraph's size stay idle. Call `i` samples with seed
/// `derive_seed(settings.seed, i)`, so a whole DBK run is reproducible.
#[derive(Debug, Clone)]
pub struct AnnealSubsolver {
    hw: HardwareGraph,
    layout: ParallelLayout,
    settings: AnnealSettings,
    ground_truth: bool,
    calls: u64,
}

impl AnnealSubsolver {
    /// `parallel` packs as many disjoint replicas as fit; otherwise one.
    pub fn new(settings: AnnealSettings, size: usize, parallel: bool) -> Result<Self> {
        let hw = build_chimera(settings.hardware_m)?;
        let mut layout = pack_parallel_embeddings(&hw, size)?;
        if !parallel {
            layout.embeddings.truncate(1);
        }
        Ok(AnnealSubsolver { hw, layout, settings, ground_truth: true, calls: 0 })
    }

    /// Skips the exact solve that supplies each call's hit target.
    pub fn without_ground_truth(mut self) -> Self {
        self.ground_truth = false;
        self
    }

    pub fn layout(&self) -> &ParallelLayout {
        &self.layout
    }

    pub fn hardware(&self) -> &HardwareGraph {
        &self.hw
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }
}

impl Subsolver for AnnealSubsolver {
    fn solve(&mut self, g: &Graph) -> Result<SubsolverOutput> {
        if g.is_empty() {
            return Ok(SubsolverOutput::default());
        }
        let settings = AnnealSettings { seed: derive_seed(self.settings.seed, self.calls), ..self.settings };
        self.calls += 1;
        let target = self.ground_truth.then(|| max_clique_exact(g).size);
        let set = parallel_solve(&self.hw, g, &self.layout, &settings, target)?;
        log::debug!(
            "anneal call {}: |V|={} best={} hits={}/{}",
            self.calls,
            g.vertex_count(),
            set.best_clique.len(),
            set.hits,
            set.reads.len()
        );
        Ok(SubsolverOutput { run: Some(set.run_record()), clique: set.best_clique })
    }
}
