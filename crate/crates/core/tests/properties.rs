//! Randomized properties of budgets, combination, min cut and embeddings.

mod common;

use common::*;
use piecut::algorithm::{combine, BudgetState, Step};
use piecut::graph::{Edge, EdgeSet};
use piecut::maxflow::{build_damage_network, damage_gain, min_cut};
use piecut::sdp::{check_feasibility, extend_orthogonally, sdp_cost, Embedding};
use piecut::Graph;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let edges: EdgeSet = pairs.into_iter().filter(|(a, b)| a != b).map(|(a, b)| Edge::new(a, b)).collect();
            Graph::from_edge_set(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_cut_source_side_is_optimal(
        g in graph_strategy(9),
        seed in any::<u64>(),
        beta_d in 1i64..6,
    ) {
        let mut r = rng(seed);
        use rand::Rng;
        let budgets: Vec<i64> = (0..g.n_total()).map(|_| r.random_range(0..=40)).collect();
        let mc = min_cut(&build_damage_network(&g, &budgets, beta_d).unwrap()).unwrap();
        let gain = damage_gain(&g, &budgets, beta_d, &mc.source_side).unwrap();
        prop_assert_eq!(gain, brute_force_max_delta(&g, &budgets, beta_d));
    }

    /// Removing random vertex sets and edge sets, with charging, keeps the
    /// ledger identity and lowers the total by at least the cut size when
    /// only edges are cut.
    #[test]
    fn ledger_identity_survives_random_cuts(g in graph_strategy(12), picks in proptest::collection::vec(any::<bool>(), 12)) {
        let mut state = BudgetState::allocate(&g, 1.5, 2.0, 1.0, 0.25);
        let mut cur = g.clone();
        let order = cur.vertex_list();
        let chosen: Vec<usize> = order.iter().copied().filter(|&v| picks[v]).collect();
        let long: EdgeSet = cur.edges().filter(|e| picks[e.u()] && !picks[e.v()]).collect();
        let before = state.total(&cur);
        let next = cur.remove_edges(&long).unwrap();
        state.charge(0, Step::LongEdges, long.clone(), &next);
        prop_assert!((state.total(&next) - (before - long.len() as f64)).abs() < 1e-9);
        cur = next;
        let (next, cut) = cur.remove_vertices(&chosen).unwrap();
        state.charge(0, Step::HeavyVertices, cut, &next);
        prop_assert!(state.ledger_mismatch(&next).is_none());
    }

    /// Largest-first greedy combination leaves each side at least `n/4`
    /// whenever no piece exceeds `3n/4`.
    #[test]
    fn greedy_combination_is_balanced(sizes in proptest::collection::vec(1usize..40, 1..12)) {
        let n: usize = sizes.iter().sum();
        prop_assume!(sizes.iter().all(|&s| 4 * s <= 3 * n));
        let mut pieces = Vec::new();
        let mut next = 0;
        for s in sizes {
            pieces.push((next..next + s).collect::<Vec<_>>());
            next += s;
        }
        let cut = combine(&Graph::empty(n), &pieces).unwrap();
        prop_assert!(4 * cut.smaller_side() >= n);
    }

    /// The two-point embedding of any bisection is exactly feasible, costs
    /// its crossing edges, and stays feasible when extended by removed
    /// vertices on private axes.
    #[test]
    fn intended_embedding_is_feasible(g in graph_strategy(14), picks in proptest::collection::vec(any::<bool>(), 14)) {
        let n = g.n_total();
        prop_assume!(n % 2 == 0);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (picks[v], v));
        let left = &order[..n / 2];
        let emb = Embedding::intended(&g, left).unwrap();
        let v = check_feasibility(&emb, &g, n);
        prop_assert!(v.max_abs() <= 1e-12);
        prop_assert!((sdp_cost(&emb, &g).unwrap() - g.cut(left).unwrap().cost() as f64).abs() < 1e-9);

        let removed: Vec<usize> = (0..n).filter(|&u| picks[u]).collect();
        let (sub, _) = g.remove_vertices(&removed).unwrap();
        let ext = extend_orthogonally(&emb.restrict(&sub).unwrap(), &removed).unwrap();
        prop_assert!(check_feasibility(&ext, &g, n).max_abs() <= 1e-12);
    }
}
