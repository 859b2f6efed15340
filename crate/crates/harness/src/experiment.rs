use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use dbk_core::exact::max_clique_exact;
use dbk_core::metrics::{
    gsp, gsp_histogram_rows, tts_fixed, write_csv, GspHistogramRow, RunSummary, SummaryRow, GSP_BINS,
};
use dbk_core::seed::derive_seed;
use dbk_core::{Graph, VertexId, VertexSet};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::corpus::{generate_corpus, load_corpus, CorpusManifest};
use crate::solve::{solve_graph, SolveOptions};

pub const RUN_MANIFEST: &str = "manifest.json";
pub const PROGRESS: &str = "progress.json";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const SUBGRAPHS_CSV: &str = "subgraphs.csv";
pub const GSP_CSV: &str = "gsp_histogram.csv";
pub const CUTOFF_CSV: &str = "cutoff_summary.csv";

/// Domain separator for per-cell seeds.
const CELL_STREAM: u64 = 0x63656c6c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub graph: usize,
    pub cutoff: usize,
    pub rep: usize,
}

impl CellKey {
    pub fn name(&self) -> String {
        format!("g{:03}_L{}_r{}", self.graph, self.cutoff, self.rep)
    }

    pub fn seed(&self, base: u64) -> u64 {
        let key = ((self.graph as u64) << 40) | ((self.cutoff as u64) << 20) | self.rep as u64;
        derive_seed(derive_seed(base, CELL_STREAM), key)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub key: CellKey,
    pub seed: u64,
    pub omega: usize,
    pub clique: Vec<VertexId>,
    pub result: crate::solve::SolveOutput,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub completed: BTreeSet<String>,
    /// Cells whose last attempt failed, with the error.
    pub failed: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RunManifest {
    tool: String,
    version: String,
    config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphRow {
    pub graph_id: usize,
    pub cutoff: usize,
    pub rep: usize,
    pub index: usize,
    pub size: usize,
    pub density: f64,
    pub extracted: usize,
    pub returned_size: usize,
    pub exact_size: usize,
    pub ratio: f64,
    pub repaired: bool,
    pub reads: Option<usize>,
    pub hits: Option<usize>,
    pub gsp: Option<f64>,
    pub t_qpu: Option<f64>,
    pub t_unembed: Option<f64>,
    pub replicas: Option<usize>,
    pub mean_broken_chains: Option<f64>,
    pub chain_strength: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffRow {
    pub cutoff: usize,
    pub cells: usize,
    pub failure_rate: f64,
    pub success_rate: f64,
    pub mean_subgraph_count: f64,
    pub mean_subgraph_density: Option<f64>,
    pub mean_subgraph_size: Option<f64>,
    pub mean_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub cells: usize,
    pub completed: usize,
    pub failed: Vec<String>,
    pub cutoffs: Vec<CutoffRow>,
    pub summary: Vec<SummaryRow>,
}

pub fn cells_dir(out: &Path) -> PathBuf {
    out.join("cells")
}

pub fn corpus_dir(out: &Path) -> PathBuf {
    out.join("corpus")
}

fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(value)? + "\n")?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes the run manifest, or checks that an existing one matches `cfg` so
/// a resumed run never mixes configurations.
fn prepare_run_dir(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    fs::create_dir_all(cells_dir(out)).with_context(|| format!("creating {}", out.display()))?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
    };
    let path = out.join(RUN_MANIFEST);
    if path.exists() {
        let existing: RunManifest = read_json(&path)?;
        if existing.config != cfg.clone() {
            bail!("{} was created with a different configuration", out.display());
        }
    }
    write_json_atomic(&path, &manifest)
}

fn corpus(cfg: &ExperimentConfig, out: &Path) -> Result<(CorpusManifest, Vec<Graph>)> {
    let dir = corpus_dir(out);
    if dir.join(crate::corpus::MANIFEST).exists() {
        let (manifest, graphs) = load_corpus(&dir)?;
        if manifest.spec == cfg.corpus && manifest.seed == cfg.seed {
            return Ok((manifest, graphs));
        }
        bail!("{} holds a corpus from a different configuration", dir.display());
    }
    generate_corpus(&cfg.corpus, cfg.seed, &dir)?;
    load_corpus(&dir)
}

/// Exact clique numbers of the corpus, cached in `ground_truth.json`.
fn ground_truth(out: &Path, graphs: &[Graph]) -> Result<Vec<usize>> {
    let path = out.join("ground_truth.json");
    if path.exists() {
        let omega: Vec<usize> = read_json(&path)?;
        if omega.len() == graphs.len() {
            return Ok(omega);
        }
    }
    let omega: Vec<usize> = graphs.par_iter().map(|g| max_clique_exact(g).size).collect();
    write_json_atomic(&path, &omega)?;
    Ok(omega)
}

pub fn all_cells(cfg: &ExperimentConfig) -> Vec<CellKey> {
    let mut cells = Vec::new();
    for graph in 0..cfg.corpus.count {
        for &cutoff in &cfg.cutoffs {
            for rep in 0..cfg.repetitions {
                cells.push(CellKey { graph, cutoff, rep });
            }
        }
    }
    cells
}

fn run_cell(cfg: &ExperimentConfig, key: CellKey, g: &Graph, omega: usize) -> Result<CellResult> {
    let seed = key.seed(cfg.seed);
    let opts = SolveOptions {
        backend: cfg.backend,
        cutoff: key.cutoff,
        sampler: dbk_core::anneal::AnnealSettings { seed, ..cfg.sampler },
        trace: false,
    };
    let result = solve_graph(g, &opts)?;
    Ok(CellResult { key, seed, omega, clique: result.result.clique.iter().copied().collect(), result })
}

/// Runs every (graph, cutoff, repetition) cell not yet recorded in the
/// progress file, then rebuilds all CSV tables from the cell files.
///
/// A failing cell is logged and left out; rerunning retries it.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<ExperimentReport> {
    let mut cfg = cfg.clone();
    cfg.normalize()?;
    prepare_run_dir(&cfg, out)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    let (_, graphs) = corpus(&cfg, out)?;
    let omega = pool.install(|| ground_truth(out, &graphs))?;

    let progress_path = out.join(PROGRESS);
    let progress: Progress = if progress_path.exists() { read_json(&progress_path)? } else { Progress::default() };
    let cells = all_cells(&cfg);
    let pending: Vec<CellKey> = cells
        .iter()
        .copied()
        .filter(|k| !(progress.completed.contains(&k.name()) && cell_path(out, k).exists()))
        .collect();
    log::info!("{} of {} cells to run", pending.len(), cells.len());

    let progress = Mutex::new(progress);
    pool.install(|| {
        pending.par_iter().for_each(|&key| {
            let outcome = run_cell(&cfg, key, &graphs[key.graph], omega[key.graph])
                .and_then(|cell| write_json_atomic(&cell_path(out, &key), &cell));
            let mut p = progress.lock().expect("progress lock");
            match outcome {
                Ok(()) => {
                    p.failed.remove(&key.name());
                    p.completed.insert(key.name());
                }
                Err(e) => {
                    log::error!("cell {} failed: {e:#}", key.name());
                    p.failed.insert(key.name(), format!("{e:#}"));
                }
            }
            if let Err(e) = write_json_atomic(&progress_path, &*p) {
                log::error!("could not save progress: {e:#}");
            }
        })
    });
    let progress = progress.into_inner().expect("progress lock");
    write_tables(&cfg, out, &graphs, &cells, &progress)
}

pub fn cell_path(out: &Path, key: &CellKey) -> PathBuf {
    cells_dir(out).join(format!("{}.json", key.name()))
}

pub fn load_cell(out: &Path, key: &CellKey) -> Result<CellResult> {
    read_json(&cell_path(out, key))
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Checks a stored cell against its graph before any of it reaches a table.
fn validate_cell(cell: &CellResult, g: &Graph) -> Result<()> {
    let clique: VertexSet = cell.clique.iter().copied().collect();
    if !g.is_clique(&clique)? {
        bail!("cell {} stores a set that is not a clique", cell.key.name());
    }
    if clique.len() != cell.result.result.size {
        bail!(
            "cell {} stores a clique of size {} but reports {}",
            cell.key.name(),
            clique.len(),
            cell.result.result.size
        );
    }
    Ok(())
}

fn write_tables(
    cfg: &ExperimentConfig,
    out: &Path,
    graphs: &[Graph],
    cells: &[CellKey],
    progress: &Progress,
) -> Result<ExperimentReport> {
    let mut loaded = Vec::new();
    let mut failed: Vec<String> = progress.failed.keys().cloned().collect();
    for key in cells.iter().filter(|k| progress.completed.contains(&k.name())) {
        match load_cell(out, key).and_then(|c| validate_cell(&c, &graphs[key.graph]).map(|()| c)) {
            Ok(cell) => loaded.push(cell),
            Err(e) => {
                log::error!("skipping cell {}: {e:#}", key.name());
                failed.push(key.name());
            }
        }
    }
    let densities: Vec<f64> = graphs.iter().map(Graph::density).collect();

    // time to solution with a fixed sample count, per (graph, cutoff) over repetitions
    let mut groups: BTreeMap<(usize, usize), Vec<&CellResult>> = BTreeMap::new();
    for c in &loaded {
        groups.entry((c.key.graph, c.key.cutoff)).or_default().push(c);
    }
    let fixed: BTreeMap<(usize, usize), Option<f64>> = groups
        .iter()
        .map(|(&k, group)| {
            let value = cfg.backend.is_sampling().then(|| group_tts_fixed(group)).flatten();
            (k, value)
        })
        .collect();

    let mut summary = Vec::with_capacity(loaded.len());
    let mut subgraphs = Vec::new();
    let mut hist: BTreeMap<usize, [usize; GSP_BINS]> = cfg.cutoffs.iter().map(|&l| (l, [0; GSP_BINS])).collect();
    for c in &loaded {
        let s: &RunSummary = &c.result.summary;
        let r = &c.result.result;
        summary.push(SummaryRow {
            graph_id: c.key.graph,
            density: densities[c.key.graph],
            cutoff: c.key.cutoff,
            rep: c.key.rep,
            omega: c.omega,
            found: r.size,
            success: r.size == c.omega,
            subgraph_count: s.subgraph_count,
            mean_density: s.mean_density,
            mean_size: s.mean_size,
            mean_ratio: mean(s.ratios.iter().copied()),
            min_ratio: s.ratios.iter().copied().reduce(f64::min),
            failure: s.failure,
            t_qpu: s.t_qpu_total,
            t_classical: s.t_unembed_total,
            dbk_proc_time: r.dbk_proc_time,
            tts_opt: s.tts_opt,
            tts_fixed: fixed[&(c.key.graph, c.key.cutoff)],
        });
        let bins = hist.entry(c.key.cutoff).or_insert([0; GSP_BINS]);
        for (b, n) in bins.iter_mut().zip(s.gsp_histogram) {
            *b += n;
        }
        for (index, (sub, &exact)) in r.subgraphs.iter().zip(&c.result.ground_truth).enumerate() {
            let run = sub.run.as_ref();
            subgraphs.push(SubgraphRow {
                graph_id: c.key.graph,
                cutoff: c.key.cutoff,
                rep: c.key.rep,
                index,
                size: sub.size,
                density: sub.density,
                extracted: sub.extracted,
                returned_size: sub.returned_size,
                exact_size: exact,
                ratio: s.ratios[index],
                repaired: sub.repaired,
                reads: run.map(|x| x.reads),
                hits: run.map(|x| x.hits),
                gsp: run.map(gsp),
                t_qpu: run.map(|x| x.t_qpu),
                t_unembed: run.map(|x| x.t_unembed),
                replicas: run.map(|x| x.replicas),
                mean_broken_chains: run.map(|x| x.mean_broken_chains),
                chain_strength: run.map(|x| x.chain_strength),
            });
        }
    }

    let cutoffs: Vec<CutoffRow> = cfg
        .cutoffs
        .iter()
        .map(|&l| {
            let rows: Vec<&SummaryRow> = summary.iter().filter(|r| r.cutoff == l).collect();
            let n = rows.len().max(1) as f64;
            CutoffRow {
                cutoff: l,
                cells: rows.len(),
                failure_rate: rows.iter().filter(|r| r.failure).count() as f64 / n,
                success_rate: rows.iter().filter(|r| r.success).count() as f64 / n,
                mean_subgraph_count: rows.iter().map(|r| r.subgraph_count as f64).sum::<f64>() / n,
                mean_subgraph_density: mean(rows.iter().filter_map(|r| r.mean_density)),
                mean_subgraph_size: mean(rows.iter().filter_map(|r| r.mean_size)),
                mean_ratio: mean(rows.iter().filter_map(|r| r.mean_ratio)),
            }
        })
        .collect();
    let gsp_rows: Vec<GspHistogramRow> = hist.iter().rev().flat_map(|(&l, h)| gsp_histogram_rows(l, h)).collect();

    write_csv(&summary, BufWriter::new(File::create(out.join(SUMMARY_CSV))?))?;
    write_csv(&subgraphs, BufWriter::new(File::create(out.join(SUBGRAPHS_CSV))?))?;
    write_csv(&gsp_rows, BufWriter::new(File::create(out.join(GSP_CSV))?))?;
    write_csv(&cutoffs, BufWriter::new(File::create(out.join(CUTOFF_CSV))?))?;

    failed.sort();
    Ok(ExperimentReport { cells: cells.len(), completed: loaded.len(), failed, cutoffs, summary })
}

/// `p` is the fraction of repetitions that found the maximum clique; times
/// are per-repetition means of the emulated annealer and unembedding totals.
pub fn group_tts_fixed(group: &[&CellResult]) -> Option<f64> {
    if group.is_empty() {
        return None;
    }
    let n = group.len() as f64;
    let p = group.iter().filter(|c| c.result.result.size == c.omega).count() as f64 / n;
    let t_qpu = group.iter().map(|c| c.result.summary.t_qpu_total).sum::<f64>() / n;
    let t_classical = group.iter().map(|c| c.result.summary.t_unembed_total).sum::<f64>() / n;
    tts_fixed(p, t_qpu, t_classical)
}
