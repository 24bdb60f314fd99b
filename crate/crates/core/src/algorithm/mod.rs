//! The iterative balanced-cut algorithm.
//!
//! Each iteration solves the relaxation on the current graph, cuts long
//! edges, removes balls around heavy vertices and runs damage control. Every
//! cut edge is paid for from a budget; [`BudgetState`] keeps the accounts and
//! [`InvariantLog`] records every check made along the way. After the last
//! iteration the remaining graph is rounded into two sides and all pieces are
//! combined greedily into a two-way cut.
//!
//! Vertex budgets are `βd` for vertices of degree at least `αd` and `αd` for
//! the rest. The reverse assignment would break the damage-control analysis,
//! which relies on low-degree vertices carrying the large budget.

mod audit;
mod budget;
mod steps;

use std::time::Instant;

use log::{debug, info, warn};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

pub use audit::{names, CheckSummary, InvariantLog};
pub use budget::{BudgetState, LedgerEntry, Step};
pub use steps::{
    damage_control, damage_slack, heavy_vertices_removal, remove_long_edges, BallRecord, DamageOutcome,
    HeavyOutcome,
};

use crate::config::KvConfig;
use crate::error::{Error, Result};
use crate::graph::{Cut, EdgeSet, Graph};
use crate::pie::check_property3;
use crate::rng::seeded;
use crate::sdp::{check_feasibility, round_balanced, solve_with_warm_start, Embedding, SdpParams, SolveStatus};

/// Random subsets tried by the damage-control post-condition check.
pub const DAMAGE_SUBSETS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlgoParams {
    /// Master constant; `β = beta_per_k · K`.
    #[serde(rename = "K")]
    pub k: f64,
    pub beta_per_k: f64,
    /// `α = alpha_per_beta · β`.
    pub alpha_per_beta: f64,
    pub delta: f64,
    /// Constant of the polylogarithmic floor on `d`.
    #[serde(rename = "C")]
    pub c: f64,
    /// Iterations; `⌈log₂ D⌉` when unset, with `D` the rounding factor.
    #[serde(rename = "T")]
    pub t: Option<usize>,
    /// Assumed rounding approximation factor; `√(log₂ n)` when unset.
    pub d_arv: Option<f64>,
    /// Balance limit of the final rounding, as a fraction of `n`.
    pub c_arv: f64,
    pub log_base: f64,
    pub sdp: SdpParams,
    /// Extra solves (with fresh seeds) when a solve does not converge.
    pub sdp_retries: usize,
    pub seed: u64,
    /// Turn the first failed hard check into an error.
    pub strict: bool,
}

impl Default for AlgoParams {
    fn default() -> Self {
        AlgoParams {
            k: 0.25,
            beta_per_k: 200.0,
            alpha_per_beta: 50.0,
            delta: 1.0 / 12.0,
            c: 0.05,
            t: None,
            d_arv: None,
            c_arv: 0.75,
            log_base: 2.0,
            sdp: SdpParams::default(),
            sdp_retries: 1,
            seed: 0,
            strict: false,
        }
    }
}

impl AlgoParams {
    pub fn beta(&self) -> f64 {
        self.beta_per_k * self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_per_beta * self.beta()
    }

    /// `η_t = 2^{-t}`.
    pub fn eta(&self, t: usize) -> f64 {
        0.5f64.powi(t as i32)
    }

    pub fn d_arv_for(&self, n: usize) -> f64 {
        self.d_arv.unwrap_or_else(|| (n.max(2) as f64).log2().sqrt())
    }

    /// `D_n = max(D, α)`.
    pub fn d_n(&self, n: usize) -> f64 {
        self.d_arv_for(n).max(self.alpha())
    }

    pub fn iterations(&self, n: usize) -> usize {
        self.t.unwrap_or_else(|| self.d_arv_for(n).log2().ceil().max(1.0) as usize)
    }

    /// Reads the keys `K`, `beta_per_k`, `alpha_per_beta`, `delta`, `C`,
    /// `T`, `d_arv`, `c_arv`, `log_base`, `sdp_retries`, `strict`, `seed`
    /// and the solver keys `sdp_k`, `sdp_eps`, `sdp_restarts`,
    /// `sdp_max_outer`, `sdp_max_inner`; missing keys keep their defaults.
    pub fn from_config(cfg: &KvConfig) -> Result<Self> {
        let d = AlgoParams::default();
        let s = d.sdp.clone();
        let p = AlgoParams {
            k: cfg.get_or("K", d.k)?,
            beta_per_k: cfg.get_or("beta_per_k", d.beta_per_k)?,
            alpha_per_beta: cfg.get_or("alpha_per_beta", d.alpha_per_beta)?,
            delta: cfg.get_or("delta", d.delta)?,
            c: cfg.get_or("C", d.c)?,
            t: cfg.get("T")?,
            d_arv: cfg.get("d_arv")?,
            c_arv: cfg.get_or("c_arv", d.c_arv)?,
            log_base: cfg.get_or("log_base", d.log_base)?,
            sdp: SdpParams {
                k: cfg.get("sdp_k")?,
                eps: cfg.get_or("sdp_eps", s.eps)?,
                restarts: cfg.get_or("sdp_restarts", s.restarts)?,
                max_outer: cfg.get_or("sdp_max_outer", s.max_outer)?,
                max_inner: cfg.get_or("sdp_max_inner", s.max_inner)?,
                ..s
            },
            sdp_retries: cfg.get_or("sdp_retries", d.sdp_retries)?,
            seed: cfg.get_or("seed", d.seed)?,
            strict: cfg.get_or("strict", d.strict)?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("K", self.k),
            ("beta_per_k", self.beta_per_k),
            ("alpha_per_beta", self.alpha_per_beta),
            ("delta", self.delta),
            ("log_base", self.log_base - 1.0),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(*v > 0.0)) {
            return Err(Error::InvalidParameter(format!("{name} must be positive")));
        }
        if !(self.c >= 0.0) {
            return Err(Error::InvalidParameter("C must be non-negative".into()));
        }
        if !(0.5..1.0).contains(&self.c_arv) {
            return Err(Error::InvalidParameter(format!("c_arv = {} is not in [1/2, 1)", self.c_arv)));
        }
        self.sdp.validate()
    }
}

/// `d = max(2 m_H / n, C log³ n)`.
pub fn compute_d(m_h: usize, n: usize, c: f64, log_base: f64) -> f64 {
    let floor = c * (n as f64).log(log_base).powi(3);
    (2.0 * m_h as f64 / n as f64).max(floor)
}

/// One iteration of the main loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub sdp_cost: f64,
    pub sdp_status: SolveStatus,
    pub long_cut: usize,
    pub heavy_components: usize,
    pub heavy_cut: usize,
    pub damage_y_size: usize,
    pub damage_cut: usize,
    /// Total budget after the iteration.
    pub total_budget: f64,
    /// Active vertices after the iteration.
    pub active_n: usize,
}

/// The `d` grid tried without knowing the noise degree, and the winner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlindSearch {
    pub grid: Vec<f64>,
    pub costs: Vec<usize>,
    pub chosen: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionResult {
    /// Final rounding sides first (when non-empty), then removed components
    /// in removal order.
    pub pieces: Vec<Vec<usize>>,
    pub final_cut: Cut,
    pub cut_cost: usize,
    pub trace: Vec<IterationRecord>,
    /// Some solve did not converge within the retry budget.
    pub degraded: bool,
    /// The low-degree fallback produced the result.
    pub fallback: bool,
    pub d: f64,
    pub params: AlgoParams,
    pub invariants: InvariantLog,
    pub blind: Option<BlindSearch>,
    /// Edges cut by the rounding of the remaining graph.
    pub rounding_cut: usize,
    pub runtime_ms: u128,
}

impl PartitionResult {
    /// `min(|S|, |T|) / n`.
    pub fn balance(&self) -> f64 {
        let n = self.final_cut.side_a.len() + self.final_cut.side_b.len();
        if n == 0 {
            0.0
        } else {
            self.final_cut.smaller_side() as f64 / n as f64
        }
    }
}

/// Budget corruption applied after the first long-edge step, to exercise
/// the ledger check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetFault {
    pub vertex: usize,
    pub delta: i64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub fault: Option<BudgetFault>,
}

pub fn run(f: &Graph, params: &AlgoParams, d: f64) -> Result<PartitionResult> {
    run_with(f, params, d, RunOptions::default())
}

/// `⌈n/(3α)⌉` lowest-degree vertices (ties to lower ids) against the rest.
pub fn simple_degree_cut(f: &Graph, alpha: f64, d: f64) -> Result<PartitionResult> {
    let start = Instant::now();
    let n = f.n_active();
    let mut order = f.vertex_list();
    order.sort_by_key(|&v| (f.neighbors(v).len(), v));
    let take = ((n as f64 / (3.0 * alpha)).ceil() as usize).min(n);
    let left: Vec<usize> = order[..take].to_vec();
    let cut = f.cut(&left)?;
    let mut pieces = vec![cut.side_a.clone(), cut.side_b.clone()];
    pieces.retain(|p| !p.is_empty());
    let params = AlgoParams { alpha_per_beta: 1.0, k: alpha / 200.0, ..AlgoParams::default() };
    Ok(PartitionResult {
        pieces,
        cut_cost: cut.cost(),
        final_cut: cut,
        trace: Vec::new(),
        degraded: false,
        fallback: true,
        d,
        params,
        invariants: InvariantLog::default(),
        blind: None,
        rounding_cut: 0,
        runtime_ms: start.elapsed().as_millis(),
    })
}

struct Checker<'a> {
    log: InvariantLog,
    strict: bool,
    fault: &'a mut Option<BudgetFault>,
}

impl Checker<'_> {
    fn hard(&mut self, name: &str, ok: bool, context: impl FnOnce() -> String) -> Result<()> {
        if !ok && self.strict {
            let msg = context();
            self.log.record(name, false, || msg.clone());
            return Err(Error::Invariant(format!("{name}: {msg}")));
        }
        if !ok {
            warn!("check {name} failed");
        }
        self.log.record(name, ok, context);
        Ok(())
    }

    /// Ledger identity, non-negative extra budget and the per-step budget
    /// decrease.
    fn after_step(
        &mut self,
        state: &mut BudgetState,
        g: &Graph,
        before: f64,
        cut: usize,
        t: usize,
        step: Step,
    ) -> Result<()> {
        if let Some(fault) = self.fault.take() {
            state.budgets[fault.vertex] += fault.delta;
        }
        let mismatch = state.ledger_mismatch(g);
        self.hard(names::LEDGER_IDENTITY, mismatch.is_none(), || {
            let (v, b, e) = mismatch.unwrap();
            format!("iteration {t}, {step:?}: vertex {v} has budget {b}, ledger says {e}")
        })?;
        let extra = state.extra_budget;
        self.hard(names::EXTRA_NONNEGATIVE, extra >= 0.0, || {
            format!("iteration {t}, {step:?}: extra budget {extra}")
        })?;
        let after = state.total(g);
        self.hard(names::BUDGET_MONOTONE, after <= before - cut as f64 + 1e-9, || {
            format!("iteration {t}, {step:?}: total {before} -> {after} after cutting {cut} edges")
        })
    }
}

/// Runs the algorithm on `f` with noise degree scale `d`.
pub fn run_with(f: &Graph, params: &AlgoParams, d: f64, opts: RunOptions) -> Result<PartitionResult> {
    params.validate()?;
    if !(d > 0.0) {
        return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
    }
    let start = Instant::now();
    let n = f.n_active();
    let (alpha, beta, delta) = (params.alpha(), params.beta(), params.delta);
    if !check_property3(f, alpha, d) {
        info!("too many low-degree vertices; using the degree cut");
        let mut r = simple_degree_cut(f, alpha, d)?;
        r.params = params.clone();
        return Ok(r);
    }

    let mut fault = opts.fault;
    let mut ck = Checker { log: InvariantLog::default(), strict: params.strict, fault: &mut fault };
    let mut state = BudgetState::allocate(f, d, alpha, beta, delta);
    let beta_d = (beta * d).ceil() as i64;
    let initial_total = state.total(f);
    let big = 0.75 * n as f64;
    let mut rng = seeded(params.seed, 0xdc);

    let iterations = params.iterations(n);
    let mut g = f.clone();
    let mut prev: Option<Embedding> = None;
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut trace = Vec::new();
    let mut degraded = false;
    let mut last_cost: Option<f64> = None;

    for t in 0..iterations {
        if g.n_active() == 0 {
            break;
        }
        let (emb, sdp_cost, status) = solve_checked(&g, n, params, prev.as_ref(), t, &mut ck, &mut degraded)?;
        if let Some(c) = last_cost {
            let slack = params.sdp.eps * f.edge_count() as f64;
            ck.log.record_soft(names::SDP_MONOTONE, sdp_cost <= c + slack, || {
                format!("iteration {t}: sdp cost {sdp_cost} after {c}")
            });
        }
        last_cost = Some(sdp_cost);

        // long edges
        let before = state.total(&g);
        let (g2, long) = remove_long_edges(&mut state, &g, &emb, delta / 2.0 + params.sdp.eps, t)?;
        ck.after_step(&mut state, &g2, before, long.len(), t, Step::LongEdges)?;

        // heavy vertices
        let before = state.total(&g2);
        let heavy = heavy_vertices_removal(&mut state, &g2, &emb, params.eta(t), n, d, beta, delta, t)?;
        ck.after_step(&mut state, &heavy.graph, before, heavy.cut.len(), t, Step::HeavyVertices)?;
        for ball in &heavy.balls {
            ck.hard(names::COMPONENT_SIZE, ball.size as f64 <= big, || {
                format!("iteration {t}: ball around {} of radius {} has {} vertices", ball.center, ball.radius, ball.size)
            })?;
        }

        // damage control
        let g3 = heavy.graph;
        let before = state.total(&g3);
        let dc = damage_control(&mut state, &g3, beta_d, t)?;
        ck.after_step(&mut state, &dc.graph, before, dc.cut.len(), t, Step::DamageControl)?;
        let y_len = dc.y.len();
        ck.hard(names::COMPONENT_SIZE, y_len as f64 <= big, || {
            format!("iteration {t}: damage-control set has {y_len} vertices")
        })?;
        check_damage_postcondition(&state, &dc.graph, beta_d, t, &mut rng, &mut ck)?;

        debug!(
            "iteration {t}: sdp {sdp_cost:.3}, long {}, balls {}, heavy cut {}, |Y| {}, damage cut {}, active {}",
            long.len(),
            heavy.components.len(),
            heavy.cut.len(),
            dc.y.len(),
            dc.cut.len(),
            dc.graph.n_active()
        );
        trace.push(IterationRecord {
            t,
            sdp_cost,
            sdp_status: status,
            long_cut: long.len(),
            heavy_components: heavy.components.len(),
            heavy_cut: heavy.cut.len(),
            damage_y_size: dc.y.len(),
            damage_cut: dc.cut.len(),
            total_budget: state.total(&dc.graph),
            active_n: dc.graph.n_active(),
        });
        components.extend(heavy.components);
        if !dc.y.is_empty() {
            components.push(dc.y);
        }
        prev = Some(emb);
        g = dc.graph;
    }

    let long_total = state.cut_count_of(Step::LongEdges);
    let bound = d * n as f64 / delta;
    ck.hard(names::LONG_EDGE_TOTAL, long_total as f64 <= bound, || {
        format!("{long_total} long edges cut, bound {bound}")
    })?;
    let upsilon = state.cut_count();
    let bound = 1.5 * beta * d * n as f64;
    ck.hard(names::TOTAL_CUT, upsilon as f64 <= bound, || {
        format!("{upsilon} edges cut by the loop, bound {bound} (initial total budget {initial_total})")
    })?;

    // final rounding of what is left
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut rounding = EdgeSet::new();
    if g.n_active() > 0 {
        let (emb, _, _) = solve_checked(&g, n, params, prev.as_ref(), iterations, &mut ck, &mut degraded)?;
        let r = round_balanced(&emb, &g, n, params.c_arv, params.seed)?;
        rounding = r.cut.crossing_edges.clone();
        pieces.extend([r.cut.side_a, r.cut.side_b].into_iter().filter(|p| !p.is_empty()));
    }
    pieces.extend(components);

    let limit = params.c_arv.max(0.75) * n as f64;
    for (i, p) in pieces.iter().enumerate() {
        ck.hard(names::PIECE_SIZE, p.len() as f64 <= limit + 1e-9, || {
            format!("piece {i} has {} vertices, limit {limit}", p.len())
        })?;
    }
    let final_cut = combine(f, &pieces)?;
    let small = final_cut.smaller_side();
    ck.hard(names::SIDE_SIZE, 4 * small >= n, || {
        format!("smaller side has {small} of {n} vertices")
    })?;
    check_conservation(f, &pieces, &state, &rounding, &final_cut, &mut ck)?;

    Ok(PartitionResult {
        pieces,
        cut_cost: final_cut.cost(),
        final_cut,
        trace,
        degraded,
        fallback: false,
        d,
        params: params.clone(),
        invariants: ck.log,
        blind: None,
        rounding_cut: rounding.len(),
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Solves on `g`, retrying with fresh seeds while unconverged, and records
/// the feasibility of the returned embedding.
fn solve_checked(
    g: &Graph,
    n: usize,
    params: &AlgoParams,
    warm: Option<&Embedding>,
    t: usize,
    ck: &mut Checker<'_>,
    degraded: &mut bool,
) -> Result<(Embedding, f64, SolveStatus)> {
    let mut best = None;
    for attempt in 0..=params.sdp_retries {
        let sdp = SdpParams {
            seed: params.seed ^ ((t as u64) << 32) ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            ..params.sdp.clone()
        };
        let sol = solve_with_warm_start(g, n, &sdp, warm)?;
        let done = sol.status == SolveStatus::Converged;
        if best.as_ref().is_none_or(|b: &crate::sdp::Solution| sol.cost < b.cost) {
            best = Some(sol);
        }
        if done {
            break;
        }
    }
    let sol = best.expect("at least one attempt");
    if sol.status == SolveStatus::Unconverged {
        *degraded = true;
    }
    let v = check_feasibility(&sol.embedding, g, n);
    let eps = params.sdp.eps;
    ck.hard(names::SDP_FEASIBLE, v.within(eps, n), || {
        format!("iteration {t}: violations {v:?}")
    })?;
    Ok((sol.embedding, sol.cost, sol.status))
}

/// Singletons and random subsets of the surviving vertices must satisfy
/// `budget(Y′) ≤ 2|∂Y′| + 2βd|Y′|`.
fn check_damage_postcondition(
    state: &BudgetState,
    g: &Graph,
    beta_d: i64,
    t: usize,
    rng: &mut crate::rng::Rng,
    ck: &mut Checker<'_>,
) -> Result<()> {
    let vs = g.vertex_list();
    let mut mask = vec![false; g.n_total()];
    for &v in &vs {
        mask[v] = true;
        let slack = damage_slack(state, g, beta_d, &mask);
        mask[v] = false;
        ck.hard(names::DAMAGE_POSTCONDITION, slack >= 0, || {
            format!("iteration {t}: singleton {{{v}}} exceeds by {}", -slack)
        })?;
    }
    if vs.is_empty() {
        return Ok(());
    }
    for _ in 0..DAMAGE_SUBSETS {
        let p: f64 = rng.random_range(0.0..1.0);
        let mut size = 0;
        for &v in &vs {
            mask[v] = rng.random_bool(p);
            size += usize::from(mask[v]);
        }
        let slack = damage_slack(state, g, beta_d, &mask);
        ck.hard(names::DAMAGE_POSTCONDITION, slack >= 0, || {
            format!("iteration {t}: random subset of {size} vertices exceeds by {}", -slack)
        })?;
    }
    Ok(())
}

/// Greedy two-way combination: largest piece first, each into the side with
/// fewer vertices (ties to the first side).
pub fn combine(f: &Graph, pieces: &[Vec<usize>]) -> Result<Cut> {
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(pieces[i].len()), i));
    let (mut a, mut b): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    for i in order {
        let side = if a.len() <= b.len() { &mut a } else { &mut b };
        side.extend_from_slice(&pieces[i]);
    }
    let covered = a.len() + b.len();
    let mut seen = vec![false; f.n_total()];
    for &v in a.iter().chain(&b) {
        if !f.is_active(v) || std::mem::replace(&mut seen[v], true) {
            return Err(Error::PieceCover(format!("vertex {v} is repeated or unknown")));
        }
    }
    if covered != f.n_active() {
        return Err(Error::PieceCover(format!("{covered} of {} vertices covered", f.n_active())));
    }
    f.cut(&a)
}

/// Every edge of `F` is cut at most once, and every edge between different
/// pieces (in particular every edge of the final cut) was cut.
fn check_conservation(
    f: &Graph,
    pieces: &[Vec<usize>],
    state: &BudgetState,
    rounding: &EdgeSet,
    final_cut: &Cut,
    ck: &mut Checker<'_>,
) -> Result<()> {
    let mut piece_of = vec![usize::MAX; f.n_total()];
    for (i, p) in pieces.iter().enumerate() {
        for &v in p {
            piece_of[v] = i;
        }
    }
    let mut cut = rounding.clone();
    let mut repeated = None;
    for entry in &state.ledger {
        for e in entry.edges.iter() {
            if !cut.insert(*e) && repeated.is_none() {
                repeated = Some(*e);
            }
        }
    }
    ck.hard(names::EDGE_CONSERVATION, repeated.is_none(), || {
        let e = repeated.unwrap();
        format!("edge ({}, {}) cut twice", e.u(), e.v())
    })?;
    let uncut = f.edges().find(|e| piece_of[e.u()] != piece_of[e.v()] && !cut.contains(e));
    ck.hard(names::EDGE_CONSERVATION, uncut.is_none(), || {
        let e = uncut.unwrap();
        format!("edge ({}, {}) joins two pieces but was never cut", e.u(), e.v())
    })?;
    let crossing = final_cut.crossing_edges.iter().filter(|e| cut.contains(e)).count();
    ck.hard(names::EDGE_CONSERVATION, crossing == final_cut.cost() && final_cut.cost() <= cut.len(), || {
        format!("{} crossing edges, {crossing} accounted, {} cut in total", final_cut.cost(), cut.len())
    })
}

/// Runs over the grid `d ∈ {2^j d_min}` up to `8m/n` and keeps the cheapest
/// result whose smaller side has at least `n/4` vertices (the cheapest
/// overall when none does).
pub fn run_blind(f: &Graph, params: &AlgoParams) -> Result<PartitionResult> {
    let n = f.n_active().max(2);
    let m = f.edge_count();
    let d_min = compute_d(0, n, params.c, params.log_base).max(1.0 / n as f64);
    let d_max = (8.0 * m as f64 / n as f64).max(d_min);
    let mut grid = Vec::new();
    let mut d = d_min;
    while d <= d_max * (1.0 + 1e-12) {
        grid.push(d);
        d *= 2.0;
    }
    let mut results = Vec::with_capacity(grid.len());
    for &d in &grid {
        results.push(run(f, params, d)?);
    }
    let balanced = |r: &PartitionResult| 4 * r.final_cut.smaller_side() >= f.n_active();
    let any_balanced = results.iter().any(balanced);
    let chosen = (0..results.len())
        .filter(|&i| !any_balanced || balanced(&results[i]))
        .min_by_key(|&i| (results[i].cut_cost, i))
        .expect("grid is nonempty");
    let costs = results.iter().map(|r| r.cut_cost).collect();
    let mut best = results.swap_remove(chosen);
    best.blind = Some(BlindSearch { grid, costs, chosen });
    Ok(best)
}
