//! The three cutting steps of an iteration.

use serde::{Deserialize, Serialize};

use super::budget::{BudgetState, Step};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::maxflow::{build_damage_network, damage_gain, min_cut};
use crate::sdp::Embedding;

/// Cuts every edge of squared length above `threshold`. Each cut edge
/// credits both endpoints and draws 3 from the extra budget.
pub fn remove_long_edges(
    state: &mut BudgetState,
    g: &Graph,
    emb: &Embedding,
    threshold: f64,
    iteration: usize,
) -> Result<(Graph, EdgeSet)> {
    let mut long = EdgeSet::new();
    for e in g.edges() {
        if emb.dist2(e.u(), e.v())? > threshold {
            long.insert(e);
        }
    }
    let needed = 3.0 * long.len() as f64;
    if state.extra_budget < needed {
        return Err(Error::Invariant(format!(
            "extra budget {} cannot pay for {} long edges at iteration {iteration}",
            state.extra_budget,
            long.len()
        )));
    }
    let out = g.remove_edges(&long)?;
    state.charge(iteration, Step::LongEdges, long.clone(), &out);
    Ok((out, long))
}

/// One removed ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRecord {
    pub center: usize,
    pub radius: f64,
    pub size: usize,
    /// Budget of the ball when it was removed.
    pub budget: i64,
    pub boundary: usize,
}

#[derive(Clone, Debug)]
pub struct HeavyOutcome {
    pub graph: Graph,
    pub components: Vec<Vec<usize>>,
    pub cut: EdgeSet,
    pub balls: Vec<BallRecord>,
}

/// Heavy-vertex removal.
///
/// Scans the active vertices in ascending id order. A still-active `u` is
/// heavy when the active vertices within squared distance `3δ` carry budget
/// at least `β η n d`; its ball is then grown to the radius in `[3δ, 4δ]`
/// with the smallest edge boundary (ties to the smaller radius) and removed.
/// Budgets credited for earlier balls count towards later heaviness tests.
#[allow(clippy::too_many_arguments)]
pub fn heavy_vertices_removal(
    state: &mut BudgetState,
    g: &Graph,
    emb: &Embedding,
    eta: f64,
    n: usize,
    d: f64,
    beta: f64,
    delta: f64,
    iteration: usize,
) -> Result<HeavyOutcome> {
    let threshold = beta * eta * n as f64 * d;
    let (inner, outer) = (3.0 * delta, 4.0 * delta);
    let mut cur = g.clone();
    let mut out = HeavyOutcome { graph: g.clone(), components: Vec::new(), cut: EdgeSet::new(), balls: Vec::new() };
    for u in g.vertex_list() {
        if !cur.is_active(u) {
            continue;
        }
        let mut by_dist: Vec<(f64, usize)> = Vec::with_capacity(cur.n_active());
        for v in cur.vertices() {
            by_dist.push((emb.dist2(u, v)?, v));
        }
        by_dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let core_budget: i64 = by_dist
            .iter()
            .take_while(|(dd, _)| *dd <= inner)
            .map(|&(_, v)| state.budget(v))
            .sum();
        if (core_budget as f64) < threshold {
            continue;
        }

        // sweep radii: 3δ, then every distinct distance in (3δ, 4δ]
        let mut inside = vec![false; cur.n_total()];
        let mut boundary: i64 = 0;
        let mut best: Option<(i64, f64, usize)> = None;
        let mut i = 0;
        let consider = |r: f64, upto: usize, boundary: i64, best: &mut Option<(i64, f64, usize)>| {
            if best.is_none_or(|b| boundary < b.0) {
                *best = Some((boundary, r, upto));
            }
        };
        let add = |v: usize, inside: &mut Vec<bool>, boundary: &mut i64| {
            inside[v] = true;
            let nin = cur.neighbors(v).iter().filter(|&&w| inside[w]).count() as i64;
            *boundary += cur.neighbors(v).len() as i64 - 2 * nin;
        };
        while i < by_dist.len() && by_dist[i].0 <= inner {
            add(by_dist[i].1, &mut inside, &mut boundary);
            i += 1;
        }
        consider(inner, i, boundary, &mut best);
        while i < by_dist.len() && by_dist[i].0 <= outer {
            let r = by_dist[i].0;
            while i < by_dist.len() && by_dist[i].0 == r {
                add(by_dist[i].1, &mut inside, &mut boundary);
                i += 1;
            }
            consider(r, i, boundary, &mut best);
        }
        let (bsize, radius, upto) = best.expect("the 3δ ball is always considered");
        let ball: Vec<usize> = by_dist[..upto].iter().map(|&(_, v)| v).collect();
        let ball_budget = state.budget_of(ball.iter().copied());
        let (next, cut) = cur.remove_vertices(&ball)?;
        debug_assert_eq!(cut.len() as i64, bsize);
        state.charge(iteration, Step::HeavyVertices, cut.clone(), &next);
        out.balls.push(BallRecord {
            center: u,
            radius,
            size: ball.len(),
            budget: ball_budget,
            boundary: cut.len(),
        });
        out.cut.extend_from(&cut);
        let mut comp = ball;
        comp.sort_unstable();
        out.components.push(comp);
        cur = next;
    }
    out.graph = cur;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DamageOutcome {
    pub graph: Graph,
    /// The maximizing set, empty when nothing was removed.
    pub y: Vec<usize>,
    pub cut: EdgeSet,
    /// `Δ(Y)` of the minimum-cut source side.
    pub gain: i64,
}

/// Damage control: removes the set `Y` maximizing
/// `budget(Y) − 2|E(Y, Ȳ)| − 2βd|Y|` when that maximum is positive.
/// `beta_d` is the integer `⌈βd⌉`.
pub fn damage_control(state: &mut BudgetState, g: &Graph, beta_d: i64, iteration: usize) -> Result<DamageOutcome> {
    let net = build_damage_network(g, &state.budgets, beta_d)?;
    let mc = min_cut(&net)?;
    let gain = damage_gain(g, &state.budgets, beta_d, &mc.source_side)?;
    // the identity budget(V) − cut = Δ(Y)
    let total = state.budget_of(g.vertices());
    if total - mc.cut_value != gain {
        return Err(Error::Invariant(format!(
            "damage network: budget {total} − cut {} ≠ Δ(Y) = {gain}",
            mc.cut_value
        )));
    }
    if gain <= 0 {
        return Ok(DamageOutcome { graph: g.clone(), y: Vec::new(), cut: EdgeSet::new(), gain });
    }
    let (next, cut) = g.remove_vertices(&mc.source_side)?;
    state.charge(iteration, Step::DamageControl, cut.clone(), &next);
    Ok(DamageOutcome { graph: next, y: mc.source_side, cut, gain })
}

/// `budget(Y′) ≤ 2|E(Y′, Ȳ′)| + 2βd|Y′|`; returns the slack (negative on a
/// violation).
pub fn damage_slack(state: &BudgetState, g: &Graph, beta_d: i64, mask: &[bool]) -> i64 {
    let budget: i64 = g.vertices().filter(|&v| mask[v]).map(|v| state.budget(v)).sum();
    let size = g.vertices().filter(|&v| mask[v]).count() as i64;
    2 * g.boundary_size_of_mask(mask) as i64 + 2 * beta_d * size - budget
}

