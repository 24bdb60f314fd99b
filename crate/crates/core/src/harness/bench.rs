//! Benchmark grids: generate, cut, score and tabulate.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{baseline_random, baseline_spectral, evaluate, ResultReport, ScoreReport};
use crate::algorithm::{compute_d, names, run, run_blind, AlgoParams};
use crate::config::KvConfig;
use crate::error::{Error, Result};
use crate::pie::{generate, GeneratorSpec};

/// Keys whose values may be comma-separated lists spanning the grid.
const GRID_KEYS: [&str; 6] = ["n", "g_degree", "h_avg_degree", "h_p", "h_q", "h_m"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    Spectral,
    Random,
}

/// One generator setting of the grid, without a seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub spec: GeneratorSpec,
    /// Noise parameter as written in the config, e.g. `h_avg_degree=4`.
    pub h_param: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub grid: Vec<GridPoint>,
    pub params: AlgoParams,
    pub seeds: Vec<u64>,
    pub baselines: Vec<Baseline>,
    /// Also run the blind `d` search on every instance.
    pub blind: bool,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// Parses a bench config. Generator keys follow
    /// [`GeneratorSpec::from_config`] (list values span a grid), algorithm
    /// keys follow [`AlgoParams::from_config`], and
    ///
    /// ```text
    /// seeds = 0, 1, 2        # or seed_count = 10 for 0..10
    /// baselines = spectral, random
    /// blind = false
    /// out = bench-out        # relative to the config file
    /// threads = 4
    /// ```
    pub fn from_config(cfg: &KvConfig, base_dir: &Path) -> Result<Self> {
        let mut points = vec![cfg.clone()];
        for key in GRID_KEYS {
            let values: Vec<String> = cfg.list(key)?;
            if values.len() <= 1 {
                continue;
            }
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.set(key, v);
                        q
                    })
                })
                .collect();
        }
        let mut grid = Vec::with_capacity(points.len());
        for mut p in points {
            for key in ["g_file", "h_file"] {
                if let Some(path) = p.raw(key) {
                    let full = base_dir.join(path);
                    if !full.exists() {
                        return Err(Error::InvalidParameter(format!("{key} {} does not exist", full.display())));
                    }
                    let full = full.display().to_string();
                    p.set(key, full);
                }
            }
            let spec = GeneratorSpec::from_config(&p)?;
            let h_param = ["h_avg_degree", "h_p", "h_q", "h_m"]
                .iter()
                .find_map(|k| p.raw(k).map(|v| format!("{k}={v}")))
                .unwrap_or_default();
            grid.push(GridPoint { spec, h_param });
        }

        let mut seeds: Vec<u64> = cfg.list("seeds")?;
        if seeds.is_empty() {
            seeds = (0..cfg.get_or("seed_count", 0u64)?).collect();
        }
        if seeds.is_empty() {
            return Err(Error::InvalidParameter("the seed list is empty".into()));
        }
        let baselines = cfg
            .list::<String>("baselines")?
            .iter()
            .map(|b| match b.as_str() {
                "spectral" => Ok(Baseline::Spectral),
                "random" => Ok(Baseline::Random),
                other => Err(Error::InvalidParameter(format!("unknown baseline {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(ExperimentConfig {
            grid,
            params: AlgoParams::from_config(cfg)?,
            seeds,
            baselines,
            blind: cfg.get_or("blind", false)?,
            out: cfg.raw("out").map(|o| base_dir.join(o)),
            threads: cfg.get("threads")?,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_config(&KvConfig::read(path)?, base)
    }
}

/// One line of `summary.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub d: f64,
    pub h_model: String,
    pub h_param: String,
    pub cut_cost: usize,
    pub crossing_noise: usize,
    pub noise_budget: usize,
    pub ratio: f64,
    pub balance: f64,
    pub spectral_cost: Option<usize>,
    pub random_cost: Option<usize>,
    pub blind_cost: Option<usize>,
    pub runtime_ms: u128,
    pub degraded: bool,
    pub fallback: bool,
    pub invariants_ok: bool,
    /// The per-iteration relaxation cost never rose by more than `ε|E|`.
    pub sdp_monotone: bool,
    /// Per-iteration relaxation costs, `;`-separated.
    pub sdp_trace: String,
    pub property3: bool,
    pub property4: bool,
}

/// Medians over the seeds of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub n: usize,
    pub h_model: String,
    pub h_param: String,
    pub runs: usize,
    pub median_ratio: f64,
    pub median_cut_cost: f64,
    pub median_crossing_noise: f64,
    pub median_random_cost: Option<f64>,
    pub median_spectral_cost: Option<f64>,
    /// Median of blind cost over known-`d` cost.
    pub median_blind_over_known: Option<f64>,
    pub max_runtime_ms: u128,
    pub degraded_runs: usize,
    pub all_invariants_ok: bool,
    pub all_sdp_monotone: bool,
    pub property3_passes: usize,
    pub property4_passes: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub groups: Vec<GroupSummary>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    spec: &'a GeneratorSpec,
    result: ResultReport,
    score: &'a ScoreReport,
}

/// Median; the mean of the middle pair for even lengths.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    match k {
        0 => f64::NAN,
        _ if k % 2 == 1 => v[k / 2],
        _ => 0.5 * (v[k / 2 - 1] + v[k / 2]),
    }
}

fn run_one(cfg: &ExperimentConfig, point: &GridPoint, seed: u64) -> Result<BenchRow> {
    let spec = GeneratorSpec { seed, ..point.spec.clone() };
    let inst = generate(&spec)?;
    let params = AlgoParams { seed, ..cfg.params.clone() };
    let n = inst.n();
    let d = compute_d(inst.noise_count(), n, params.c, params.log_base);
    let result = run(&inst.f, &params, d)?;
    let mut score = evaluate(&result, &inst)?;
    for b in &cfg.baselines {
        match b {
            Baseline::Spectral => score.spectral_cost = Some(baseline_spectral(&inst.f)?.cost()),
            Baseline::Random => score.random_cost = Some(baseline_random(&inst.f, seed)?.cost()),
        }
    }
    let blind_cost = if cfg.blind { Some(run_blind(&inst.f, &params)?.cut_cost) } else { None };
    let label = format!("n{n}_{}_{}_s{seed}", spec.noise.name(), point.h_param.replace('=', ""));
    if let Some(out) = &cfg.out {
        let dir = out.join("runs").join(&label);
        fs::create_dir_all(&dir)?;
        let report = RunReport { spec: &spec, result: ResultReport::from(&result), score: &score };
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    }
    let monotone = result.invariants.get(names::SDP_MONOTONE).is_none_or(|c| c.passed());
    Ok(BenchRow {
        seed,
        n,
        d,
        h_model: spec.noise.name().to_string(),
        h_param: point.h_param.clone(),
        cut_cost: score.cut_cost,
        crossing_noise: score.crossing_noise,
        noise_budget: score.noise_budget,
        ratio: score.ratio,
        balance: score.balance,
        spectral_cost: score.spectral_cost,
        random_cost: score.random_cost,
        blind_cost,
        runtime_ms: result.runtime_ms,
        degraded: result.degraded,
        fallback: result.fallback,
        invariants_ok: score.invariants_passed,
        sdp_monotone: monotone,
        sdp_trace: result.trace.iter().map(|t| format!("{:.6}", t.sdp_cost)).collect::<Vec<_>>().join(";"),
        property3: score.property3,
        property4: score.property4,
    })
}

fn summarize(point: &GridPoint, rows: &[&BenchRow]) -> GroupSummary {
    let med = |f: &dyn Fn(&BenchRow) -> f64| median(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
    let med_opt = |f: &dyn Fn(&BenchRow) -> Option<f64>| {
        let v: Option<Vec<f64>> = rows.iter().map(|r| f(r)).collect();
        v.filter(|v| !v.is_empty()).map(|v| median(&v))
    };
    GroupSummary {
        n: point.spec.n,
        h_model: point.spec.noise.name().to_string(),
        h_param: point.h_param.clone(),
        runs: rows.len(),
        median_ratio: med(&|r| r.ratio),
        median_cut_cost: med(&|r| r.cut_cost as f64),
        median_crossing_noise: med(&|r| r.crossing_noise as f64),
        median_random_cost: med_opt(&|r| r.random_cost.map(|c| c as f64)),
        median_spectral_cost: med_opt(&|r| r.spectral_cost.map(|c| c as f64)),
        median_blind_over_known: med_opt(&|r| r.blind_cost.map(|b| b as f64 / r.cut_cost.max(1) as f64)),
        max_runtime_ms: rows.iter().map(|r| r.runtime_ms).max().unwrap_or(0),
        degraded_runs: rows.iter().filter(|r| r.degraded).count(),
        all_invariants_ok: rows.iter().all(|r| r.invariants_ok),
        all_sdp_monotone: rows.iter().all(|r| r.sdp_monotone),
        property3_passes: rows.iter().filter(|r| r.property3).count(),
        property4_passes: rows.iter().filter(|r| r.property4).count(),
    }
}

/// Runs every grid point for every seed, in parallel, and writes
/// `summary.csv`, `summary.json` and per-run `report.json` files when an
/// output directory is configured.
pub fn run_bench(cfg: &ExperimentConfig) -> Result<BenchOutcome> {
    let jobs: Vec<(usize, u64)> = (0..cfg.grid.len())
        .flat_map(|g| cfg.seeds.iter().map(move |&s| (g, s)))
        .collect();
    let work = || jobs.par_iter().map(|&(g, s)| run_one(cfg, &cfg.grid[g], s)).collect::<Result<Vec<_>>>();
    let rows = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let groups = cfg
        .grid
        .iter()
        .enumerate()
        .map(|(g, point)| {
            let mine: Vec<&BenchRow> =
                jobs.iter().zip(&rows).filter(|((j, _), _)| *j == g).map(|(_, r)| r).collect();
            summarize(point, &mine)
        })
        .collect();
    let outcome = BenchOutcome { rows, groups };
    if let Some(out) = &cfg.out {
        fs::create_dir_all(out)?;
        let mut w = csv::Writer::from_path(out.join("summary.csv")).map_err(csv_error)?;
        for r in &outcome.rows {
            w.serialize(r).map_err(csv_error)?;
        }
        w.flush()?;
        fs::write(out.join("summary.json"), serde_json::to_string_pretty(&outcome.groups)?)?;
    }
    Ok(outcome)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
