use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};
use dbk_core::metrics::{tts_opt, write_csv, SubgraphRunRecord};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::experiment::{all_cells, group_tts_fixed, load_cell, CellResult, PROGRESS, RUN_MANIFEST};

pub const TTS_CSV: &str = "tts.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtsRow {
    pub graph_id: usize,
    pub cutoff: usize,
    pub reps: usize,
    /// Fraction of repetitions that found the maximum clique.
    pub p: f64,
    /// Mean over repetitions; undefined when any repetition is undefined.
    pub tts_opt: Option<f64>,
    pub tts_fixed: Option<f64>,
}

/// Recomputes both time-to-solution figures from the stored cell records of
/// a run directory and writes them to `tts.csv`.
pub fn recompute(run_dir: &Path) -> Result<Vec<TtsRow>> {
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join(RUN_MANIFEST)).context("reading run manifest")?)?;
    let mut cfg: ExperimentConfig = serde_json::from_value(manifest["config"].clone())?;
    cfg.normalize()?;
    let progress: crate::experiment::Progress =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join(PROGRESS)).context("reading progress")?)?;

    let mut groups: BTreeMap<(usize, usize), Vec<CellResult>> = BTreeMap::new();
    for key in all_cells(&cfg).iter().filter(|k| progress.completed.contains(&k.name())) {
        let cell = load_cell(run_dir, key)?;
        groups.entry((key.graph, key.cutoff)).or_default().push(cell);
    }
    let rows: Vec<TtsRow> = groups
        .iter()
        .map(|(&(graph_id, cutoff), cells)| {
            let per_rep: Vec<Option<f64>> = cells
                .iter()
                .map(|c| {
                    let r = &c.result.result;
                    let runs: Vec<SubgraphRunRecord> = r.subgraphs.iter().filter_map(|s| s.run.clone()).collect();
                    (runs.len() == r.subgraphs.len()).then(|| tts_opt(r.dbk_proc_time, &runs)).flatten()
                })
                .collect();
            let tts_opt = per_rep.iter().copied().sum::<Option<f64>>().map(|s| s / cells.len() as f64);
            let refs: Vec<&CellResult> = cells.iter().collect();
            TtsRow {
                graph_id,
                cutoff,
                reps: cells.len(),
                p: cells.iter().filter(|c| c.result.result.size == c.omega).count() as f64 / cells.len() as f64,
                tts_opt,
                tts_fixed: cfg.backend.is_sampling().then(|| group_tts_fixed(&refs)).flatten(),
            }
        })
        .collect();
    write_csv(&rows, BufWriter::new(File::create(run_dir.join(TTS_CSV))?))?;
    Ok(rows)
}
