//! Behaviour of the cutting steps and the full pipeline on small fixtures.

mod common;

use common::*;
use piecut::algorithm::{
    damage_control, heavy_vertices_removal, names, remove_long_edges, run, run_blind, run_with, simple_degree_cut,
    AlgoParams, BudgetFault, BudgetState, RunOptions,
};
use piecut::harness::{audit, audit_with, evaluate, ResultReport};
use piecut::sdp::{sdp_cost, solve, solve_with_warm_start, Embedding, SdpParams, HALF};
use piecut::Graph;

fn flat_embedding(n: usize) -> Embedding {
    let mut emb = Embedding::new(n, 2, 0.0);
    for v in 0..n {
        emb.set_point(v, &[HALF.sqrt(), 0.0]);
    }
    emb
}

#[test]
fn short_edges_are_kept() {
    let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 0.5);
    let before = state.clone();
    let (g2, cut) = remove_long_edges(&mut state, &g, &flat_embedding(4), 0.25, 0).unwrap();
    assert!(cut.is_empty());
    assert_eq!(g2.edge_count(), 3);
    assert_eq!(state.budgets, before.budgets);
}

#[test]
fn long_edge_exhausting_extra_budget_aborts() {
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let emb = Embedding::intended(&g, &[0]).unwrap();
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 1.0);
    state.extra_budget = 2.0;
    assert!(remove_long_edges(&mut state, &g, &emb, 0.5, 0).is_err());
}

#[test]
fn identical_points_form_one_ball() {
    let g = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 3)]).unwrap();
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 1.0 / 12.0);
    // total budget 6 ≥ βηnd = 1 · 1 · 6 · 1
    let out = heavy_vertices_removal(&mut state, &g, &flat_embedding(6), 1.0, 6, 1.0, 1.0, 1.0 / 12.0, 0).unwrap();
    assert_eq!(out.components, vec![vec![0, 1, 2, 3, 4, 5]]);
    assert!(out.cut.is_empty());
    assert_eq!(out.graph.n_active(), 0);
}

#[test]
fn light_vertices_are_not_removed() {
    let g = Graph::from_edges(6, [(0, 1), (2, 3)]).unwrap();
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 1.0 / 12.0);
    let out = heavy_vertices_removal(&mut state, &g, &flat_embedding(6), 1.0, 6, 1.0, 2.0, 1.0 / 12.0, 0).unwrap();
    assert!(out.components.is_empty());
    assert_eq!(out.graph.n_active(), 6);
}

/// The ball radius minimizing the boundary wins.
#[test]
fn ball_radius_minimizes_boundary() {
    let delta = 0.1;
    // 0 and 1 at the center, 2 at squared distance 0.35 (inside [3δ, 4δ]),
    // 3 far away; 1-2 and 2-3 edges
    let g = Graph::from_edges(4, [(1, 2), (2, 3)]).unwrap();
    let mut emb = Embedding::new(4, 3, 0.0);
    let r = HALF.sqrt();
    emb.set_point(0, &[r, 0.0, 0.0]);
    emb.set_point(1, &[r, 0.0, 0.0]);
    // ‖a − b‖² = 1 − 2⟨a,b⟩ with ⟨a,b⟩ = r·x, so x = (1 − 0.35) / (2r)
    let x = 0.65 / (2.0 * r);
    emb.set_point(2, &[x, (HALF - x * x).sqrt(), 0.0]);
    emb.set_point(3, &[0.0, 0.0, r]);
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, delta);
    state.budgets = vec![5, 5, 0, 0];
    let out = heavy_vertices_removal(&mut state, &g, &emb, 1.0, 4, 1.0, 2.0, delta, 0).unwrap();
    // r = 3δ cuts 1-2, r = 0.35 cuts 2-3: a tie, kept at the smaller radius
    assert_eq!(out.components[0], vec![0, 1]);
    assert_eq!(out.balls[0].radius, 3.0 * delta);
    assert_eq!(out.cut.len(), 1);
}

#[test]
fn damage_control_examples() {
    // edgeless, budgets ≤ 2βd: nothing to remove
    let g = Graph::empty(4);
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 1.0);
    state.budgets = vec![6, 2, 0, 5];
    state.initial = state.budgets.clone();
    let out = damage_control(&mut state, &g, 3, 0).unwrap();
    assert!(out.y.is_empty());
    assert_eq!(out.graph.n_active(), 4);

    // isolated vertex with budget 10 against 2βd = 6
    let g = Graph::from_edges(3, [(1, 2)]).unwrap();
    let mut state = BudgetState::allocate(&g, 1.0, 1.0, 1.0, 1.0);
    state.budgets = vec![10, 1, 1];
    state.initial = state.budgets.clone();
    let out = damage_control(&mut state, &g, 3, 0).unwrap();
    assert_eq!(out.y, vec![0]);
    assert!(out.cut.is_empty());
    assert_eq!(out.gain, 4);
}

/// Solving on a subgraph, warm-started from the previous embedding, never
/// costs more than the inherited embedding.
#[test]
fn warm_started_restriction_does_not_increase_cost() {
    let inst = bench_instance(128, 4.0, 7);
    let sol = solve(&inst.f, 128, &SdpParams::default()).unwrap();
    let (sub, _) = inst.f.remove_vertices(&(0..40).collect::<Vec<_>>()).unwrap();
    let inherited = sdp_cost(&sol.embedding.restrict(&sub).unwrap(), &sub).unwrap();
    let next = solve_with_warm_start(&sub, 128, &SdpParams::default(), Some(&sol.embedding)).unwrap();
    assert!(next.cost <= inherited + 1e-9, "{} > {inherited}", next.cost);
}

#[test]
fn runs_are_deterministic() {
    let inst = bench_instance(128, 4.0, 3);
    let p = bench_params(3);
    let a = run(&inst.f, &p, 4.0).unwrap();
    let b = run(&inst.f, &p, 4.0).unwrap();
    assert_eq!(a.final_cut, b.final_cut);
    assert_eq!(a.pieces, b.pieces);
    assert_eq!(a.trace, b.trace);
}

#[test]
fn bench_instance_scores_and_serializes() {
    let inst = bench_instance(128, 4.0, 11);
    let r = run(&inst.f, &bench_params(11), 4.0).unwrap();
    let score = evaluate(&r, &inst).unwrap();
    assert_eq!(score.cut_cost, r.cut_cost);
    assert!(score.ratio <= 10.0);
    let json = serde_json::to_value(ResultReport::from(&r)).unwrap();
    for key in ["cut_cost", "balance", "pieces", "iterations", "params", "degraded", "runtime_ms"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    let it = &json["iterations"][0];
    for key in ["t", "sdp_cost", "long_cut", "heavy_components", "heavy_cut", "damage_y_size", "damage_cut"] {
        assert!(it.get(key).is_some(), "missing iterations.{key}");
    }
    assert!(it.get("total_budget").is_some() && it.get("active_n").is_some());
}

#[test]
fn blind_search_includes_its_grid_points() {
    let inst = bench_instance(128, 4.0, 5);
    let p = bench_params(5);
    let blind = run_blind(&inst.f, &p).unwrap();
    let search = blind.blind.clone().unwrap();
    assert!(search.grid.len() >= 2);
    for (i, &d) in search.grid.iter().enumerate() {
        let r = run(&inst.f, &p, d).unwrap();
        assert_eq!(r.cut_cost, search.costs[i]);
        if 4 * r.final_cut.smaller_side() >= 128 {
            assert!(blind.cut_cost <= r.cut_cost);
        }
    }
    let edgeless = run_blind(&Graph::empty(20), &p).unwrap();
    assert_eq!(edgeless.cut_cost, 0);
}

#[test]
fn degree_cut_cost_bound() {
    // a cycle plus chords; every degree at most (α + 2) d with α = 1, d = 2
    let mut e: Vec<(usize, usize)> = (0..30).map(|i| (i, (i + 1) % 30)).collect();
    e.extend((0..15).step_by(3).map(|i| (i, i + 15)));
    let g = Graph::from_edges(30, e).unwrap();
    let (alpha, d) = (1.0, 2.0);
    let r = simple_degree_cut(&g, alpha, d).unwrap();
    let l = r.final_cut.side_a.len();
    assert_eq!(l, 10);
    assert!(r.cut_cost as f64 <= (alpha + 2.0) * d * l as f64);
}

#[test]
fn audit_of_edgeless_graph_passes() {
    let report = audit(&Graph::empty(16), &bench_params(0), 1.0);
    assert!(report.passed, "{report:?}");
    assert_eq!(report.cut_cost, Some(0));
}

#[test]
fn audit_reports_corrupted_budget() {
    let inst = bench_instance(64, 4.0, 1);
    let p = bench_params(1);
    let opts = RunOptions { fault: Some(BudgetFault { vertex: 9, delta: -2 }) };
    let report = audit_with(&inst.f, &p, 4.0, opts);
    assert!(!report.passed);
    let line = report.line(names::LEDGER_IDENTITY).unwrap();
    assert!(line.failed >= 1);
    assert!(line.first_failure.as_deref().unwrap().contains("vertex 9"));

    let strict = AlgoParams { strict: true, ..p };
    assert!(run_with(&inst.f, &strict, 4.0, opts).is_err());
}
