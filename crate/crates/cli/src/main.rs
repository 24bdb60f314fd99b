use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use piecut::algorithm::{compute_d, run, run_blind, AlgoParams};
use piecut::config::KvConfig;
use piecut::harness::{
    audit, baseline_random, baseline_spectral, evaluate_report, run_bench, ExperimentConfig, ResultReport,
};
use piecut::pie::{generate, read_bundle, write_bundle, GeneratorSpec};
use piecut::Graph;

#[derive(Parser)]
#[command(name = "piecut", version, about = "Planted balanced cuts: generate, cut, score, benchmark")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a planted instance bundle.
    Gen {
        /// `key = value` generator config.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides, e.g. `--set n=256 --set h_avg_degree=4`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Bundle directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Cut a graph given as an edge list.
    Cut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "blind", required_unless_present_any = ["blind", "m_h"])]
        d: Option<f64>,
        /// Derive `d` from a known noise edge count.
        #[arg(long, conflicts_with = "blind")]
        m_h: Option<usize>,
        /// Search `d` over a geometric grid.
        #[arg(long)]
        blind: bool,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a saved result against a bundle's ground truth.
    Eval {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        result: PathBuf,
        /// Also run the spectral and random baselines.
        #[arg(long)]
        baselines: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark grid.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline and report every invariant check.
    Audit {
        /// Bundle directory; `d` then defaults to the true noise degree.
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        bundle: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        d: Option<f64>,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgoArgs {
    /// `key = value` algorithm config; flags override it.
    #[arg(long = "params")]
    params: Option<PathBuf>,
    #[arg(long = "K")]
    k: Option<f64>,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long)]
    alpha_per_beta: Option<f64>,
    #[arg(long)]
    beta_per_k: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    strict: bool,
}

impl AlgoArgs {
    fn resolve(&self) -> Result<AlgoParams> {
        let mut cfg = match &self.params {
            Some(p) => KvConfig::read(p).with_context(|| format!("reading {}", p.display()))?,
            None => KvConfig::default(),
        };
        let overrides = [
            ("K", self.k.map(|v| v.to_string())),
            ("C", self.c.map(|v| v.to_string())),
            ("T", self.t.map(|v| v.to_string())),
            ("alpha_per_beta", self.alpha_per_beta.map(|v| v.to_string())),
            ("beta_per_k", self.beta_per_k.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (key, v) in overrides {
            if let Some(v) = v {
                cfg.set(key, v);
            }
        }
        if self.strict {
            cfg.set("strict", true);
        }
        Ok(AlgoParams::from_config(&cfg)?)
    }
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { config, set, seed, out } => {
            let mut cfg = match config {
                Some(p) => KvConfig::read(&p).with_context(|| format!("reading {}", p.display()))?,
                None => KvConfig::default(),
            };
            for kv in set {
                let Some((k, v)) = kv.split_once('=') else {
                    bail!("--set expects KEY=VALUE, got {kv:?}");
                };
                cfg.set(k.trim(), v.trim());
            }
            if let Some(s) = seed {
                cfg.set("seed", s);
            }
            let spec = GeneratorSpec::from_config(&cfg)?;
            let inst = generate(&spec)?;
            write_bundle(&inst, &out)?;
            eprintln!(
                "wrote {}: n = {}, {} edges, {} noise edges, {} across the hidden cut",
                out.display(),
                inst.n(),
                inst.f.edge_count(),
                inst.noise_count(),
                inst.crossing_noise()
            );
        }
        Cmd::Cut { graph, d, m_h, blind, algo, out } => {
            let f = Graph::read_edge_list(&graph).with_context(|| format!("reading {}", graph.display()))?;
            let params = algo.resolve()?;
            let result = if blind {
                run_blind(&f, &params)?
            } else {
                let d = match (d, m_h) {
                    (Some(d), _) => d,
                    (None, Some(m)) => compute_d(m, f.n_active(), params.c, params.log_base),
                    (None, None) => unreachable!("clap requires one of them"),
                };
                run(&f, &params, d)?
            };
            eprintln!(
                "cut cost {}, balance {:.3}, {} pieces, d = {:.3}{}{}",
                result.cut_cost,
                result.balance(),
                result.pieces.len(),
                result.d,
                if result.degraded { ", degraded" } else { "" },
                if result.fallback { ", degree fallback" } else { "" }
            );
            write_json(out.as_deref(), &ResultReport::from(&result))?;
        }
        Cmd::Eval { bundle, result, baselines, out } => {
            let inst = read_bundle(&bundle)?;
            let text = fs::read_to_string(&result).with_context(|| format!("reading {}", result.display()))?;
            let report: ResultReport = serde_json::from_str(&text)?;
            let mut score = evaluate_report(&report, &inst)?;
            if baselines {
                score.spectral_cost = Some(baseline_spectral(&inst.f)?.cost());
                score.random_cost = Some(baseline_random(&inst.f, report.params.seed)?.cost());
            }
            write_json(out.as_deref(), &score)?;
        }
        Cmd::Bench { config, out } => {
            let mut cfg = ExperimentConfig::read(&config)?;
            if out.is_some() {
                cfg.out = out;
            }
            let outcome = run_bench(&cfg)?;
            println!(
                "{:>5} {:<14} {:<20} {:>4} {:>8} {:>9} {:>9} {:>9} {:>6} {:>6}",
                "n", "h_model", "h_param", "runs", "ratio", "cost", "crossing", "random", "inv", "mono"
            );
            for g in &outcome.groups {
                println!(
                    "{:>5} {:<14} {:<20} {:>4} {:>8.3} {:>9.1} {:>9.1} {:>9} {:>6} {:>6}",
                    g.n,
                    g.h_model,
                    g.h_param,
                    g.runs,
                    g.median_ratio,
                    g.median_cut_cost,
                    g.median_crossing_noise,
                    g.median_random_cost.map_or("-".into(), |c| format!("{c:.1}")),
                    g.all_invariants_ok,
                    g.all_sdp_monotone
                );
            }
            if let Some(o) = &cfg.out {
                eprintln!("wrote {}", o.join("summary.csv").display());
            }
        }
        Cmd::Audit { bundle, graph, d, algo, out } => {
            let params = algo.resolve()?;
            let (f, d) = match (bundle, graph) {
                (Some(b), _) => {
                    let inst = read_bundle(&b)?;
                    let d = d.unwrap_or_else(|| compute_d(inst.noise_count(), inst.n(), params.c, params.log_base));
                    (inst.f, d)
                }
                (None, Some(g)) => {
                    let Some(d) = d else { bail!("--d is required with --graph") };
                    (Graph::read_edge_list(&g)?, d)
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let report = audit(&f, &params, d);
            for l in &report.lines {
                let status = match (l.failed, l.soft) {
                    (0, _) => "pass",
                    (_, true) => "warn",
                    _ => "FAIL",
                };
                eprintln!("{status} {:<32} {:>7} checked {:>5} failed", l.name, l.checked, l.failed);
                if let Some(ctx) = &l.first_failure {
                    eprintln!("     first: {ctx}");
                }
            }
            if let Some(e) = &report.aborted {
                eprintln!("aborted: {e}");
            }
            write_json(out.as_deref(), &report)?;
            if !report.passed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
