use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use dbk_core::graph::{generate_er, read_graph, write_graph};
use dbk_core::seed::derive_seed;
use dbk_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::CorpusSpec;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: usize,
    /// DIMACS file name relative to the corpus directory.
    pub file: String,
    pub n: usize,
    pub density: f64,
    /// Seed that produced the graph (after any connectivity retries).
    pub seed: u64,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub spec: CorpusSpec,
    pub seed: u64,
    pub graphs: Vec<CorpusEntry>,
}

/// Graph `i` draws its density and generator seed from `derive_seed(seed, i)`.
pub fn generate_corpus(spec: &CorpusSpec, seed: u64, dir: &Path) -> Result<CorpusManifest> {
    spec.validate()?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut graphs = Vec::with_capacity(spec.count);
    for id in 0..spec.count {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, id as u64));
        let density = rng.gen_range(spec.density_min..=spec.density_max);
        let (g, used) = generate_er(spec.n, density, rng.gen(), spec.require_connected)?;
        let file = format!("graph_{id:03}.dimacs");
        write_graph(&dir.join(&file), &g)?;
        graphs.push(CorpusEntry { id, file, n: spec.n, density, seed: used, edges: g.edge_count() });
    }
    let manifest = CorpusManifest { spec: spec.clone(), seed, graphs };
    fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)? + "\n")?;
    log::info!("wrote {} graphs to {}", spec.count, dir.display());
    Ok(manifest)
}

pub fn load_corpus(dir: &Path) -> Result<(CorpusManifest, Vec<Graph>)> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let manifest: CorpusManifest =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let graphs = manifest
        .graphs
        .iter()
        .map(|e| {
            let file: PathBuf = dir.join(&e.file);
            let g = read_graph(&file).with_context(|| format!("reading {}", file.display()))?;
            ensure!(g.edge_count() == e.edges, "{} has {} edges, manifest says {}", e.file, g.edge_count(), e.edges);
            Ok(g)
        })
        .collect::<Result<_>>()?;
    Ok((manifest, graphs))
}
