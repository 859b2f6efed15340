use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgAction, Parser, Subcommand};
use dbk_core::graph::read_graph;
use dbk_harness::corpus::generate_corpus;
use dbk_harness::experiment::run_experiment;
use dbk_harness::solve::{solve_graph, verify, SolveOptions};
use dbk_harness::{tts, Backend, ExperimentConfig, EXIT_VERIFY_FAILED};

#[derive(Parser)]
#[command(name = "dbk", version, about = "Maximum clique by decomposition with exact or emulated-annealing subsolvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (generate, experiment) or result file (solve).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    backend: Option<Backend>,
    /// Cutoff; experiments accept a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    cutoff: Vec<usize>,
    #[arg(long, global = true)]
    reads: Option<usize>,
    #[arg(long, global = true)]
    sweeps: Option<usize>,
    #[arg(long = "hardware-m", global = true)]
    hardware_m: Option<usize>,
    /// Chain strength prefactor.
    #[arg(long, global = true)]
    prefactor: Option<f64>,
    /// Check the solve result against the exact solver.
    #[arg(long, global = true)]
    verify: bool,
    /// Worker threads for experiment cells (0 = one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// More log output; repeat for debug.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded Erdős–Rényi corpus in DIMACS format with a manifest.
    Generate {
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        density_min: Option<f64>,
        #[arg(long)]
        density_max: Option<f64>,
    },
    /// Solve one graph (DIMACS, or JSON by extension).
    Solve {
        graph: PathBuf,
        /// Write the decomposition trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run (or resume) a graph x cutoff x repetition sweep.
    Experiment {
        #[arg(long)]
        repetitions: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Recompute time-to-solution figures from a finished run directory.
    Tts { run_dir: PathBuf },
}

impl Cli {
    fn experiment_config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(backend) = self.backend {
            cfg.backend = backend;
        }
        if !self.cutoff.is_empty() {
            cfg.cutoffs = self.cutoff.clone();
        }
        if let Some(reads) = self.reads {
            cfg.sampler.num_reads = reads;
        }
        if let Some(sweeps) = self.sweeps {
            cfg.sampler.sweeps = sweeps;
        }
        if let Some(m) = self.hardware_m {
            cfg.sampler.hardware_m = m;
        }
        if let Some(prefactor) = self.prefactor {
            cfg.sampler.chain_strength_prefactor = prefactor;
        }
        if let Some(jobs) = self.jobs {
            cfg.jobs = jobs;
        }
        Ok(cfg)
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("run"))
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let mut cfg = cli.experiment_config()?;
    match &cli.command {
        Command::Generate { count, n, density_min, density_max } => {
            cfg.corpus.count = count.unwrap_or(cfg.corpus.count);
            cfg.corpus.n = n.unwrap_or(cfg.corpus.n);
            cfg.corpus.density_min = density_min.unwrap_or(cfg.corpus.density_min);
            cfg.corpus.density_max = density_max.unwrap_or(cfg.corpus.density_max);
            let out = cli.out_dir();
            let manifest = generate_corpus(&cfg.corpus, cfg.seed, &out)?;
            println!("wrote {} graphs to {}", manifest.graphs.len(), out.display());
        }
        Command::Solve { graph, trace } => {
            let g = read_graph(graph).with_context(|| format!("reading {}", graph.display()))?;
            let opts = SolveOptions {
                backend: cli.backend.unwrap_or(Backend::Exact),
                cutoff: cfg.cutoffs.iter().copied().min().unwrap_or(1),
                sampler: cfg.sampler,
                trace: trace.is_some(),
            };
            let opts =
                SolveOptions { sampler: dbk_core::anneal::AnnealSettings { seed: cfg.seed, ..opts.sampler }, ..opts };
            let out = solve_graph(&g, &opts)?;
            if let Some(path) = trace {
                out.result.write_trace_jsonl(std::io::BufWriter::new(std::fs::File::create(path)?))?;
            }
            let json = serde_json::to_string_pretty(&out)?;
            match &cli.out {
                Some(path) => std::fs::write(path, json + "\n")?,
                None => println!("{json}"),
            }
            eprintln!(
                "clique size {} ({} subsolver calls, {:.3}s decomposition)",
                out.result.size, out.result.subgraph_count, out.result.dbk_proc_time
            );
            if cli.verify {
                if !verify(&g, &out)? {
                    eprintln!("verification failed: result is not a maximum clique");
                    return Ok(ExitCode::from(EXIT_VERIFY_FAILED as u8));
                }
                eprintln!("verified against the exact solver");
            }
        }
        Command::Experiment { repetitions, count, n } => {
            cfg.repetitions = repetitions.unwrap_or(cfg.repetitions);
            cfg.corpus.count = count.unwrap_or(cfg.corpus.count);
            cfg.corpus.n = n.unwrap_or(cfg.corpus.n);
            let out = cli.out_dir();
            let report = run_experiment(&cfg, &out)?;
            println!("{}/{} cells complete in {}", report.completed, report.cells, out.display());
            for row in &report.cutoffs {
                println!(
                    "cutoff {:>4}: failure rate {:.3}, success rate {:.3}, mean subgraphs {:.2}",
                    row.cutoff, row.failure_rate, row.success_rate, row.mean_subgraph_count
                );
            }
            if !report.failed.is_empty() {
                eprintln!("{} cells failed: {}", report.failed.len(), report.failed.join(", "));
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Tts { run_dir } => {
            let rows = tts::recompute(run_dir)?;
            let fmt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |t| format!("{t:.6}"));
            for r in &rows {
                println!(
                    "graph {:>3} cutoff {:>4}: p={:.2} tts_opt={} tts_fixed={}",
                    r.graph_id,
                    r.cutoff,
                    r.p,
                    fmt(r.tts_opt),
                    fmt(r.tts_fixed)
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
