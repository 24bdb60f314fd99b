//! Exhaustive oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use piecut::algorithm::AlgoParams;
use piecut::pie::{generate, GeneratorSpec, NoiseModel, PlantedInstance, PlantedModel};
use piecut::Graph;
use piecut::rng::{seeded, Rng as ChaCha};
use rand::Rng;

pub fn rng(seed: u64) -> ChaCha {
    seeded(seed, 0x7465_7374)
}

/// Constants of `configs/bench.conf`.
pub fn bench_params(seed: u64) -> AlgoParams {
    AlgoParams { k: 0.01, alpha_per_beta: 0.5, c: 0.005, seed, ..AlgoParams::default() }
}

/// Two random 8-regular graphs plus Erdős–Rényi noise of mean degree `avg`.
pub fn bench_instance(n: usize, avg: f64, seed: u64) -> PlantedInstance {
    generate(&GeneratorSpec {
        n,
        planted: PlantedModel::TwoRandomRegular { degree: 8 },
        noise: NoiseModel::ErdosRenyi { p: avg / (n - 1) as f64 },
        seed,
    })
    .unwrap()
}

pub fn random_graph(n: usize, p: f64, r: &mut ChaCha) -> Graph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::from_edges(n, e).unwrap()
}

/// Edges with exactly one endpoint in the subset encoded by `mask` bits.
pub fn boundary_bits(g: &Graph, mask: u32) -> i64 {
    g.edges().filter(|e| ((mask >> e.u()) & 1) != ((mask >> e.v()) & 1)).count() as i64
}

/// `Δ(Y) = budget(Y) − 2|∂Y| − 2βd|Y|`, straight from the definition.
pub fn delta_bits(g: &Graph, budgets: &[i64], beta_d: i64, mask: u32) -> i64 {
    let members = (0..g.n_total()).filter(|&v| (mask >> v) & 1 == 1);
    let (mut budget, mut size) = (0, 0);
    for v in members {
        budget += budgets[v];
        size += 1;
    }
    budget - 2 * boundary_bits(g, mask) - 2 * beta_d * size
}

/// Maximum of `Δ` over all `2^n` subsets of a graph whose ids are `0..n`.
pub fn brute_force_max_delta(g: &Graph, budgets: &[i64], beta_d: i64) -> i64 {
    let n = g.n_total();
    (0..1u32 << n).map(|m| delta_bits(g, budgets, beta_d, m)).max().unwrap()
}

/// Cheapest cut with both sides of at most `limit` vertices, by enumeration.
pub fn exhaustive_balanced_cut(g: &Graph, limit: usize) -> usize {
    let n = g.n_total();
    (0..1u32 << n)
        .filter(|m| {
            let a = m.count_ones() as usize;
            a <= limit && n - a <= limit
        })
        .map(|m| boundary_bits(g, m) as usize)
        .min()
        .unwrap()
}
