//! Results checked against independent exhaustive or statistical oracles.

mod common;

use std::time::Instant;

use common::*;
use piecut::algorithm::{damage_control, damage_slack, BudgetState};
use piecut::harness::{baseline_random, baseline_spectral, random_bisection_expectation};
use piecut::maxflow::{build_damage_network, damage_gain, min_cut};
use piecut::pie::sample_pi;
use piecut::sdp::{round_balanced, solve, SdpParams};
use piecut::Graph;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn random_budgets(n: usize, r: &mut piecut::rng::Rng) -> Vec<i64> {
    (0..n).map(|_| r.random_range(0..=40)).collect()
}

#[test]
fn min_cut_maximizes_damage_gain() {
    let mut r = rng(1);
    for _ in 0..40 {
        let n = r.random_range(1..=10);
        let g = random_graph(n, r.random_range(0.1..0.7), &mut r);
        let budgets = random_budgets(n, &mut r);
        let beta_d = [2, 5][r.random_range(0..2)];
        let mc = min_cut(&build_damage_network(&g, &budgets, beta_d).unwrap()).unwrap();
        let got = damage_gain(&g, &budgets, beta_d, &mc.source_side).unwrap();
        assert_eq!(got, brute_force_max_delta(&g, &budgets, beta_d));
        let total: i64 = budgets.iter().sum();
        assert_eq!(total - mc.cut_value, got);
    }
}

/// After damage control no subset of the survivors has positive `Δ`,
/// checked over every subset.
#[test]
fn damage_control_postcondition_is_exhaustively_true() {
    let mut r = rng(2);
    for _ in 0..30 {
        let n = r.random_range(2..=10);
        let g = random_graph(n, r.random_range(0.1..0.6), &mut r);
        let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 1.0);
        state.budgets = random_budgets(n, &mut r);
        state.initial = state.budgets.clone();
        let beta_d = [2, 5][r.random_range(0..2)];
        let out = damage_control(&mut state, &g, beta_d, 0).unwrap();
        let left = out.graph.vertex_list();
        for bits in 0..1u32 << left.len() {
            let mut mask = vec![false; n];
            for (i, &v) in left.iter().enumerate() {
                mask[v] = (bits >> i) & 1 == 1;
            }
            assert!(damage_slack(&state, &out.graph, beta_d, &mask) >= 0);
        }
    }
}

#[test]
fn rounding_is_near_the_exhaustive_optimum() {
    let mut r = rng(3);
    let mut worst: f64 = 1.0;
    for _ in 0..15 {
        let n = 2 * r.random_range(3..=7);
        let g = random_graph(n, r.random_range(0.2..0.6), &mut r);
        let sol = solve(&g, n, &SdpParams::default()).unwrap();
        let cut = round_balanced(&sol.embedding, &g, n, 0.75, 0).unwrap().cut;
        let opt = exhaustive_balanced_cut(&g, (0.75 * n as f64) as usize);
        assert!(cut.larger_side() as f64 <= 0.75 * n as f64);
        assert!(cut.cost() >= opt);
        // every bisection is a feasible point of the relaxation
        let bisection = exhaustive_balanced_cut(&g, n / 2);
        assert!(sol.cost <= bisection as f64 + 1e-6, "relaxation {} above bisection {bisection}", sol.cost);
        if opt > 0 {
            worst = worst.max(cut.cost() as f64 / opt as f64);
        } else {
            assert_eq!(cut.cost(), 0);
        }
    }
    assert!(worst <= 3.0, "worst ratio {worst}");
}

#[test]
fn random_bisection_expectation_matches_enumeration() {
    let mut r = rng(4);
    for n in [4usize, 5, 8, 9] {
        let g = random_graph(n, 0.5, &mut r);
        let half = n / 2;
        let (mut total, mut count) = (0usize, 0usize);
        for m in 0..1u32 << n {
            if m.count_ones() as usize == half {
                total += boundary_bits(&g, m) as usize;
                count += 1;
            }
        }
        let exact = total as f64 / count as f64;
        assert!((random_bisection_expectation(&g) - exact).abs() < 1e-9, "n = {n}");
    }
    // the random baseline's empirical mean on a small graph
    let g = random_graph(10, 0.5, &mut r);
    let mean = (0..4000).map(|s| baseline_random(&g, s).unwrap().cost() as f64).sum::<f64>() / 4000.0;
    assert!((mean - random_bisection_expectation(&g)).abs() < 0.2, "{mean}");
}

#[test]
fn spectral_on_complete_bipartite() {
    let k22 = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let cost = baseline_spectral(&k22).unwrap().cost();
    assert!(cost >= exhaustive_balanced_cut(&k22, 2));
    assert_eq!(exhaustive_balanced_cut(&k22, 2), 2);
}

/// All `((n/2)!)²` side-preserving bijections are equally likely.
#[test]
fn bijection_sampler_is_uniform() {
    let draws = 20_000;
    let mut counts = std::collections::BTreeMap::new();
    for seed in 0..draws {
        *counts.entry(sample_pi(4, seed).unwrap()).or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 4);
    let expect = draws as f64 / 4.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    let p = 1.0 - ChiSquared::new(3.0).unwrap().cdf(chi2);
    assert!(p > 0.01, "chi-square {chi2}, p {p}");
}

#[test]
fn damage_min_cut_scales() {
    let mut r = rng(5);
    let n = 3000;
    let g = random_graph(n, 10.0 / n as f64, &mut r);
    let budgets: Vec<i64> = (0..n).map(|_| r.random_range(0..=60)).collect();
    let start = Instant::now();
    let mc = min_cut(&build_damage_network(&g, &budgets, 10).unwrap()).unwrap();
    assert!(start.elapsed().as_secs_f64() < 10.0);
    let gain = damage_gain(&g, &budgets, 10, &mc.source_side).unwrap();
    assert_eq!(budgets.iter().sum::<i64>() - mc.cut_value, gain);
    assert!(gain >= 0);
}
