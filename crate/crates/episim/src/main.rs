use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use episim::batch::parallel_batch;
use episim::config::{ExperimentConfig, GraphSpec};
use episim::io::{load_edge_list, write_event, write_outcomes_csv};
use episim::report::{classify_report, upper_bound_report, MetricsReport};
use episim::sweep::run_experiment;
use episim_core::epidemics::Simulation;
use episim_core::graphs::EtaMode;
use episim_core::rng::derive_seed;
use episim_core::{Graph, GraphMetrics, Strategy};

#[derive(Parser)]
#[command(name = "episim", version, about = "SIS/SIR epidemics with an external infection agent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degrees, spectral radius and isoperimetric constants of a graph.
    Metrics {
        /// Edge-list file or generator spec such as `star:leaves=100`.
        graph: String,
        /// Set sizes m for η(m).
        #[arg(long, value_delimiter = ',')]
        eta: Vec<usize>,
        #[arg(long, value_enum, default_value_t = EtaChoice::Auto)]
        eta_mode: EtaChoice,
        /// Candidate sets per size when sampling.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the replications of one configuration and print the per-run CSV.
    Simulate {
        config: PathBuf,
        /// Sweep size to run; defaults to the first.
        #[arg(long)]
        size: Option<usize>,
        /// CSV destination; defaults to the config's raw_csv, then stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Event log of replication 0.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Run a full sweep and print the summary JSON.
    Sweep {
        config: PathBuf,
        /// Overrides the config's summary_json.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Expected extinction time of the dominating birth-death chain.
    Bounds {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        d_max: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Number of nodes (largest chain state).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        start: usize,
    },
    /// Regime label for a graph, infection rate and strategy.
    Classify {
        graph: String,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum)]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        threshold: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaChoice {
    Auto,
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyKind {
    Null,
    TargetedMaxDegree,
    DegreeThreshold,
    Uniform,
    LinearScaling,
}

fn load_graph(arg: &str) -> Result<(String, Graph)> {
    let path = Path::new(arg);
    if path.is_file() {
        let g = load_edge_list(path).with_context(|| format!("reading {arg}"))?;
        return Ok((format!("file:{arg}"), g));
    }
    let spec: GraphSpec = arg.parse()?;
    let g = spec.build(Path::new(""))?;
    Ok((spec.to_string(), g))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Metrics { graph, eta, eta_mode, samples, seed } => {
            let (_, g) = load_graph(&graph)?;
            let mode = match eta_mode {
                EtaChoice::Auto => GraphMetrics::auto_eta_mode(&g, seed),
                EtaChoice::Exact => EtaMode::Exact,
                EtaChoice::Sampled => EtaMode::Sampled { samples, seed },
            };
            let metrics = GraphMetrics::compute(&g, &eta, mode)?;
            print_json(&MetricsReport::new(&g, &metrics))
        }
        Command::Simulate { config, size, output, trajectory } => {
            let cfg = ExperimentConfig::load(&config)?;
            let plan = cfg.plan(Path::new(""))?;
            let point = match size {
                Some(s) => plan.iter().find(|p| p.size == Some(s)).with_context(|| format!("size {s} not in n_sweep"))?,
                None => &plan[0],
            };
            let outcomes = parallel_batch(&point.graph, &point.params, &point.initial, cfg.replications, point.base_seed)?;
            match output.or_else(|| point.raw_csv.clone()) {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
                    write_outcomes_csv(&mut w, &outcomes)?;
                    w.flush()?;
                }
                None => write_outcomes_csv(io::stdout().lock(), &outcomes)?,
            }
            if let Some(path) = trajectory {
                let seed = derive_seed(point.base_seed, 0);
                let initial = point.initial.resolve(&point.graph, seed)?;
                let mut sim = Simulation::new(&point.graph, &point.params, &initial, seed)?;
                let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
                let mut failed = None;
                sim.run_observed(|e| {
                    if failed.is_none() {
                        failed = write_event(&mut w, e).err();
                    }
                });
                if let Some(e) = failed {
                    return Err(e.into());
                }
                w.flush()?;
            }
            Ok(())
        }
        Command::Sweep { config, summary } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if summary.is_some() {
                cfg.outputs.summary_json = summary;
            }
            let report = run_experiment(&cfg)?;
            print_json(&report)
        }
        Command::Bounds { beta, d_max, mu, n, start } => print_json(&upper_bound_report(beta, d_max, mu, n, start)?),
        Command::Classify { graph, beta, strategy, mu, gamma, alpha, threshold, seed } => {
            if !(beta.is_finite() && beta > 0.0) {
                bail!("beta must be finite and > 0");
            }
            let (name, g) = load_graph(&graph)?;
            let strategy = match strategy {
                StrategyKind::Null => Strategy::Null,
                StrategyKind::TargetedMaxDegree => Strategy::TargetedMaxDegree { mu },
                StrategyKind::DegreeThreshold => Strategy::DegreeThreshold { mu, threshold, seed },
                StrategyKind::Uniform => Strategy::Uniform { mu },
                StrategyKind::LinearScaling => Strategy::LinearScaling { gamma, alpha },
            };
            strategy.validate()?;
            let n = g.node_count();
            let m = ((n as f64).powf(alpha).floor() as usize).clamp(1, n.saturating_sub(1).max(1));
            let sizes = if n > 1 { vec![m] } else { Vec::new() };
            let metrics = GraphMetrics::compute(&g, &sizes, GraphMetrics::auto_eta_mode(&g, seed))?;
            print_json(&classify_report(name, &g, &metrics, beta, &strategy, alpha))
        }
    }
}
