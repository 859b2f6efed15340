use std::path::Path;

use anyhow::{ensure, Context, Result};
use dbk_core::anneal::AnnealSettings;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Branch-and-bound subsolver.
    Exact,
    /// Emulated annealer with a single embedding.
    Sa,
    /// Emulated annealer with as many disjoint embeddings as fit.
    ParallelSa,
}

impl Backend {
    pub fn is_sampling(self) -> bool {
        !matches!(self, Backend::Exact)
    }
}

/// Erdős–Rényi corpus: `count` graphs on `n` vertices, each with an edge
/// probability drawn uniformly from `[density_min, density_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub count: usize,
    pub n: usize,
    pub density_min: f64,
    pub density_max: f64,
    pub require_connected: bool,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { count: 20, n: 40, density_min: 0.1, density_max: 0.9, require_connected: false }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.count >= 1, "corpus count must be at least 1");
        ensure!(self.n >= 1, "graphs need at least one vertex");
        ensure!(
            (0.0..=1.0).contains(&self.density_min)
                && (0.0..=1.0).contains(&self.density_max)
                && self.density_min <= self.density_max,
            "density range [{}, {}] is not inside [0, 1]",
            self.density_min,
            self.density_max
        );
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub corpus: CorpusSpec,
    /// Kept sorted in descending order.
    pub cutoffs: Vec<usize>,
    pub backend: Backend,
    /// Sampler settings; `sampler.seed` is ignored in favour of per-cell seeds.
    pub sampler: AnnealSettings,
    pub repetitions: usize,
    /// Base seed every other seed is derived from.
    pub seed: u64,
    /// Worker threads; 0 picks one per core.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            corpus: CorpusSpec::default(),
            cutoffs: vec![36, 30, 24, 18, 12],
            backend: Backend::Sa,
            sampler: AnnealSettings::default(),
            repetitions: 1,
            seed: 20221015,
            jobs: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Checks the configuration and puts cutoffs in descending order.
    pub fn normalize(&mut self) -> Result<()> {
        self.corpus.validate()?;
        self.cutoffs.sort_unstable_by(|a, b| b.cmp(a));
        self.cutoffs.dedup();
        ensure!(!self.cutoffs.is_empty(), "at least one cutoff is required");
        ensure!(self.cutoffs.iter().all(|&l| l >= 1), "cutoffs must be positive");
        ensure!(self.repetitions >= 1, "repetitions must be at least 1");
        ensure!(self.sampler.num_reads >= 1 && self.sampler.sweeps >= 1, "reads and sweeps must be positive");
        ensure!(self.sampler.hardware_m >= 1, "hardware grid must be at least 1x1");
        if self.backend.is_sampling() {
            let capacity = 4 * self.sampler.hardware_m;
            for &l in &self.cutoffs {
                ensure!(
                    l.min(self.corpus.n) <= capacity,
                    "cutoff {l} does not fit a {0}x{0} grid (at most {capacity})",
                    self.sampler.hardware_m
                );
            }
        }
        Ok(())
    }
}
