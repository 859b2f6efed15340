//! Time-to-solution, ground-state probability, failure and approximation
//! ratio bookkeeping, plus the CSV rows the experiment harness emits.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dbk::DbkResult;
use crate::error::Result;

/// Target success probability for time-to-solution.
pub const TTS_CONFIDENCE: f64 = 0.99;

/// Number of equal-width bins on `[0, 1]` in ground-state-probability histograms.
pub const GSP_BINS: usize = 10;

/// CSV columns that carry measured wall-clock time and so differ between
/// otherwise identical runs.
pub const WALL_CLOCK_COLUMNS: &[&str] = &["dbk_proc_time", "tts_opt"];

/// Sampling statistics of one subgraph solved by a sampling backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphRunRecord {
    /// Reads taken (`A`).
    pub reads: usize,
    /// Emulated annealer time for the call, seconds.
    pub t_qpu: f64,
    /// Emulated unembedding time for the call, seconds.
    pub t_unembed: f64,
    /// Reads in which at least one replica reached `ground_truth_size`.
    pub hits: usize,
    /// Exact clique number of the subgraph, when it was computed.
    pub ground_truth_size: Option<usize>,
    /// Largest clique over all reads and replicas.
    pub best_size: usize,
    pub replicas: usize,
    pub mean_broken_chains: f64,
    pub chain_strength: f64,
}

/// Fraction of reads that hit the optimum at least once.
pub fn gsp(rec: &SubgraphRunRecord) -> f64 {
    assert!(rec.reads >= 1, "a run record needs at least one read");
    rec.hits as f64 / rec.reads as f64
}

/// Repetitions needed to succeed with 99% probability at per-trial success
/// `p`: `log(0.01) / log(1 - p)`, never below one trial. `None` when `p = 0`.
pub fn repetitions(p: f64) -> Option<f64> {
    if p <= 0.0 {
        None
    } else if p >= 1.0 {
        Some(1.0)
    } else {
        Some(((1.0 - TTS_CONFIDENCE).ln() / (1.0 - p).ln()).max(1.0))
    }
}

/// Optimal-sample time to solution of a whole decomposition:
/// `dbk_proc_time + sum_i (T_qpu_i + T_unembed_i) / A_i * R(p_i)`.
/// Undefined as soon as one subgraph has `p_i = 0`.
pub fn tts_opt(dbk_proc_time: f64, recs: &[SubgraphRunRecord]) -> Option<f64> {
    tts_opt_terms(dbk_proc_time, recs.iter().map(TtsTerm::from))
}

/// Per-subgraph input to [`tts_opt_terms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtsTerm {
    pub reads: usize,
    /// Annealer plus unembedding time for the call, seconds.
    pub seconds: f64,
    pub p: f64,
}

impl From<&SubgraphRunRecord> for TtsTerm {
    fn from(rec: &SubgraphRunRecord) -> Self {
        TtsTerm { reads: rec.reads, seconds: rec.t_qpu + rec.t_unembed, p: gsp(rec) }
    }
}

pub fn tts_opt_terms(dbk_proc_time: f64, terms: impl IntoIterator<Item = TtsTerm>) -> Option<f64> {
    terms.into_iter().try_fold(dbk_proc_time, |acc, t| {
        let r = repetitions(t.p)?;
        Some(acc + t.seconds / t.reads as f64 * r)
    })
}

/// Time to solution with a fixed number of samples per call, where `p` is the
/// fraction of complete runs that found the maximum clique.
pub fn tts_fixed(p: f64, t_qpu: f64, t_classical: f64) -> Option<f64> {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    repetitions(p).map(|r| (t_qpu + t_classical) * r)
}

pub fn gsp_bin(p: f64) -> usize {
    ((p * GSP_BINS as f64) as usize).min(GSP_BINS - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub subgraph_count: usize,
    pub mean_density: Option<f64>,
    pub mean_size: Option<f64>,
    /// Per solved subgraph: best clique found / exact clique number.
    pub ratios: Vec<f64>,
    /// Some sampled subgraph never reached its optimum.
    pub failure: bool,
    pub gsp: Vec<f64>,
    pub gsp_histogram: [usize; GSP_BINS],
    /// Undefined when a subgraph was solved without sampling or never hit.
    pub tts_opt: Option<f64>,
    pub t_qpu_total: f64,
    pub t_unembed_total: f64,
}

/// Summarizes one decomposition. `ground_truth[i]` is the exact clique number
/// of the `i`-th solved subgraph.
pub fn summarize_run(dbk: &DbkResult, ground_truth: &[usize]) -> RunSummary {
    assert_eq!(dbk.subgraphs.len(), ground_truth.len(), "one ground truth per solved subgraph");
    let count = dbk.subgraphs.len();
    let mean = |f: &dyn Fn(&crate::dbk::SubgraphRecord) -> f64| {
        (count > 0).then(|| dbk.subgraphs.iter().map(f).sum::<f64>() / count as f64)
    };
    let ratios = dbk
        .subgraphs
        .iter()
        .zip(ground_truth)
        .map(|(s, &exact)| if exact == 0 { 1.0 } else { s.returned_size as f64 / exact as f64 })
        .collect();
    let runs: Vec<SubgraphRunRecord> = dbk.subgraphs.iter().filter_map(|s| s.run.clone()).collect();
    let gsp_values: Vec<f64> = runs.iter().map(gsp).collect();
    let mut hist = [0; GSP_BINS];
    for &p in &gsp_values {
        hist[gsp_bin(p)] += 1;
    }
    RunSummary {
        subgraph_count: count,
        mean_density: mean(&|s| s.density),
        mean_size: mean(&|s| s.size as f64),
        ratios,
        failure: runs.iter().any(|r| r.ground_truth_size.is_some() && r.hits == 0),
        gsp: gsp_values,
        gsp_histogram: hist,
        tts_opt: (runs.len() == count).then(|| tts_opt(dbk.dbk_proc_time, &runs)).flatten(),
        t_qpu_total: runs.iter().map(|r| r.t_qpu).sum(),
        t_unembed_total: runs.iter().map(|r| r.t_unembed).sum(),
    }
}

/// One row per (graph, cutoff, repetition).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub graph_id: usize,
    pub density: f64,
    pub cutoff: usize,
    pub rep: usize,
    pub omega: usize,
    pub found: usize,
    pub success: bool,
    pub subgraph_count: usize,
    pub mean_density: Option<f64>,
    pub mean_size: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub failure: bool,
    pub t_qpu: f64,
    pub t_classical: f64,
    pub dbk_proc_time: f64,
    pub tts_opt: Option<f64>,
    /// Computed over all repetitions of this (graph, cutoff).
    pub tts_fixed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GspHistogramRow {
    pub cutoff: usize,
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
}

pub fn gsp_histogram_rows(cutoff: usize, hist: &[usize; GSP_BINS]) -> Vec<GspHistogramRow> {
    hist.iter()
        .enumerate()
        .map(|(i, &count)| GspHistogramRow {
            cutoff,
            bin_lo: i as f64 / GSP_BINS as f64,
            bin_hi: (i + 1) as f64 / GSP_BINS as f64,
            count,
        })
        .collect()
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbk::SubgraphRecord;

    fn rec(reads: usize, hits: usize, t_qpu: f64, t_unembed: f64) -> SubgraphRunRecord {
        SubgraphRunRecord {
            reads,
            t_qpu,
            t_unembed,
            hits,
            ground_truth_size: Some(3),
            best_size: 3,
            replicas: 1,
            mean_broken_chains: 0.0,
            chain_strength: 0.4,
        }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-6 * b.abs().max(1e-12)
    }

    #[test]
    fn gsp_examples() {
        assert_eq!(gsp(&rec(1000, 1000, 0.0, 0.0)), 1.0);
        assert_eq!(gsp(&rec(1000, 0, 0.0, 0.0)), 0.0);
        assert_eq!(gsp(&rec(1000, 137, 0.0, 0.0)), 0.137);
    }

    #[test]
    fn tts_opt_examples() {
        assert!(close(tts_opt(0.0, &[rec(1000, 1000, 1.0, 0.1)]).unwrap(), 0.0011));
        let half = TtsTerm { reads: 1, seconds: 1.0, p: 0.5 };
        assert!((tts_opt_terms(0.0, [half]).unwrap() - 6.6439).abs() < 1e-3);
        assert!(close(tts_opt(0.0, &[rec(2, 1, 1.0, 0.0)]).unwrap(), 0.5 * 6.643856189774724));
        assert!(close(tts_opt(0.0, &[rec(1, 1, 1.0, 0.0)]).unwrap(), 1.0));
        assert_eq!(tts_opt(0.0, &[rec(1000, 0, 1.0, 0.1)]), None);
        assert_eq!(tts_opt(2.5, &[]), Some(2.5));
    }

    #[test]
    fn tts_fixed_examples() {
        assert_eq!(tts_fixed(1.0, 2.0, 1.0), Some(3.0));
        assert_eq!(tts_fixed(0.0, 2.0, 1.0), None);
        assert!(close(tts_fixed(0.9, 0.5, 0.5).unwrap(), 2.0));
    }

    #[test]
    fn histogram_bins() {
        assert_eq!(gsp_bin(0.0), 0);
        assert_eq!(gsp_bin(0.099), 0);
        assert_eq!(gsp_bin(0.1), 1);
        assert_eq!(gsp_bin(1.0), GSP_BINS - 1);
        let rows = gsp_histogram_rows(12, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 4]);
        assert_eq!(rows.len(), GSP_BINS);
        assert_eq!((rows[9].bin_lo, rows[9].bin_hi, rows[9].count), (0.9, 1.0, 4));
    }

    fn dbk_with(subgraphs: Vec<SubgraphRecord>) -> DbkResult {
        DbkResult {
            clique: Default::default(),
            size: 0,
            subgraph_count: subgraphs.len(),
            subgraphs,
            dbk_proc_time: 0.01,
            subsolver_time: 0.0,
            trace: vec![],
        }
    }

    fn sub(returned: usize, run: Option<SubgraphRunRecord>) -> SubgraphRecord {
        SubgraphRecord {
            size: 6,
            density: 0.5,
            extracted: 1,
            returned_size: returned,
            repaired: false,
            solve_time: 0.0,
            run,
        }
    }

    #[test]
    fn summary_examples() {
        let s = summarize_run(&dbk_with(vec![sub(3, Some(rec(10, 10, 1.0, 0.0)))]), &[3]);
        assert!(!s.failure);
        assert_eq!(s.ratios, vec![1.0]);
        assert_eq!(s.gsp_histogram[9], 1);

        let s = summarize_run(&dbk_with(vec![]), &[]);
        assert_eq!(s.subgraph_count, 0);
        assert!(s.ratios.is_empty());
        assert_eq!(s.mean_size, None);
        assert_eq!(s.tts_opt, Some(0.01));

        let s = summarize_run(&dbk_with(vec![sub(4, Some(rec(10, 0, 1.0, 0.0))), sub(5, None)]), &[5, 5]);
        assert_eq!(s.ratios, vec![0.8, 1.0]);
        assert!(s.failure);
        assert_eq!(s.tts_opt, None);
    }

    #[test]
    fn csv_leaves_undefined_values_empty() {
        let row = SummaryRow {
            graph_id: 0,
            density: 0.5,
            cutoff: 12,
            rep: 0,
            omega: 4,
            found: 4,
            success: true,
            subgraph_count: 0,
            mean_density: None,
            mean_size: None,
            mean_ratio: None,
            min_ratio: None,
            failure: false,
            t_qpu: 0.0,
            t_classical: 0.0,
            dbk_proc_time: 0.001,
            tts_opt: None,
            tts_fixed: None,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        for col in WALL_CLOCK_COLUMNS {
            assert!(header.split(',').any(|h| h == *col));
        }
        assert!(lines.next().unwrap().ends_with(",,"));
    }
}
