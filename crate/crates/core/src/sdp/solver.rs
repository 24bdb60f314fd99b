//! Low-rank augmented-Lagrangian solver.
//!
//! Points live in the nonnegative orthant of `R^k` on the radius-`√2/2`
//! sphere, so every inner product is nonnegative and every squared distance
//! is at most 1. The spreading and triangle constraints enter through a
//! PHR augmented Lagrangian; triangles are separated lazily from the Gram
//! matrix. The final iterate is made exactly feasible by mixing every point
//! with its own private axis, which scales all cross inner products by the
//! same factor `1 − t`.

use std::collections::HashMap;

use log::debug;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_feasibility, dot, sdp_cost, Embedding, ViolationReport, HALF};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::seeded;

/// Above this many active vertices the exact triangle maximum used by the
/// repair is replaced by the solver's own separation scan.
const CERTIFY_LIMIT: usize = 2048;

/// Triangles this close to tight are added to the active set.
const NEAR_TIGHT: f64 = 0.01;

/// Off-axis jitter of clustered starting points.
const START_NOISE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SdpParams {
    /// Shared dimension; `None` means `⌈log₂ n⌉ + 4` for the instance size.
    pub k: Option<usize>,
    /// Feasibility slack the solve must reach to count as converged.
    pub eps: f64,
    /// Slack the solver keeps tightening towards while budget remains.
    pub inner_tol: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Initial projected-gradient step and its backtracking factor.
    pub step0: f64,
    pub backtrack: f64,
    pub rho0: f64,
    pub rho_max: f64,
    /// Triangles added to the active set per separation round;
    /// 0 means `10 · |V|`. The active set is capped at four rounds' worth.
    pub triangle_budget: usize,
    /// `(u, w)` pairs sampled per separation round on large graphs.
    pub triangle_pairs: usize,
    /// Separation scans all pairs up to this many vertices.
    pub exhaustive_limit: usize,
    /// Random starts besides the warm start.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SdpParams {
    fn default() -> Self {
        SdpParams {
            k: None,
            eps: 1e-3,
            inner_tol: 1e-6,
            max_outer: 25,
            max_inner: 50,
            step0: 1.0,
            backtrack: 0.5,
            rho0: 1.0,
            rho_max: 1e6,
            triangle_budget: 0,
            triangle_pairs: 60_000,
            exhaustive_limit: 400,
            restarts: 1,
            seed: 0,
        }
    }
}

impl SdpParams {
    pub fn dim_for(&self, n_total: usize) -> usize {
        self.k
            .unwrap_or_else(|| (n_total.max(2) as f64).log2().ceil() as usize + 4)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k.is_some_and(|k| k < 2) {
            return Err(Error::InvalidParameter("sdp dimension k must be at least 2".into()));
        }
        if !(self.eps > 0.0) || !(self.inner_tol > 0.0) {
            return Err(Error::InvalidParameter("sdp tolerances must be positive".into()));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) || !(self.step0 > 0.0) {
            return Err(Error::InvalidParameter("bad sdp step schedule".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Converged,
    Unconverged,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Best candidate after repair; exactly feasible up to rounding error.
    pub embedding: Embedding,
    pub cost: f64,
    pub status: SolveStatus,
    /// Violations of the best raw iterate before repair.
    pub raw_violation: ViolationReport,
    /// Mixing weight the repair applied to the returned candidate.
    pub repair: f64,
    pub outer_iterations: usize,
}

/// Solves the relaxation on the active vertices of `g`.
pub fn solve(g: &Graph, n_total: usize, params: &SdpParams) -> Result<Solution> {
    solve_with_warm_start(g, n_total, params, None)
}

/// As [`solve`], additionally seeding the search with `warm` (which must
/// cover the active vertices of `g`) and keeping it as a candidate.
pub fn solve_with_warm_start(
    g: &Graph,
    n_total: usize,
    params: &SdpParams,
    warm: Option<&Embedding>,
) -> Result<Solution> {
    params.validate()?;
    if g.n_active() == 0 {
        return Err(Error::InvalidParameter("cannot solve on an empty graph".into()));
    }
    let k = params.dim_for(n_total);
    let problem = Problem::new(g, n_total, k);

    // (embedding, raw violations, outer iterations, converged)
    let mut candidates: Vec<(Embedding, ViolationReport, usize, bool)> = Vec::new();
    let exact = |emb: Embedding| {
        let raw = check_feasibility(&emb, g, n_total);
        let ok = raw.within(params.eps, n_total);
        (emb, raw, 0, ok)
    };
    let mut runs = Vec::new();
    if let Some(w) = warm {
        let w = w.restrict(g)?;
        runs.push(problem.start_from(&w, &mut seeded(params.seed, 0x77)));
        // feasible as is when inherited from a feasible superset solution
        candidates.push(exact(w));
    }
    // the first phase spreads against the active size so it always bisects
    let spectral = Problem { n_total: problem.na, ..problem.clone() };
    for r in 0..params.restarts.max(usize::from(warm.is_none())) {
        let mut rng = seeded(params.seed, r as u64 + 1);
        let side = spectral.spectral_side(params, g, n_total, &mut rng)?;
        let clustered = problem.two_cluster(&side, 0.0, &mut rng);
        let integral_cost = problem.raw_cost(&clustered);
        candidates.push(exact(problem.to_embedding(&clustered, params.eps)));
        if integral_cost > 0.0 {
            runs.push(problem.two_cluster(&side, START_NOISE, &mut rng));
        }
    }
    for (i, x0) in runs.into_iter().enumerate() {
        let run = problem.augmented_lagrangian(x0, params, FULL, seeded(params.seed, 0x1000 + i as u64));
        let emb = problem.to_embedding(&run.x, params.eps);
        candidates.push((emb, run.violation, run.outer, run.converged));
    }

    let mut best: Option<Solution> = None;
    for (emb, raw_violation, outer, converged) in candidates {
        let (repaired, t) = repair(&emb, n_total, &problem)?;
        let cost = sdp_cost(&repaired, g)?;
        let status = if converged { SolveStatus::Converged } else { SolveStatus::Unconverged };
        debug!("sdp candidate: cost {cost:.4}, repair {t:.2e}, {status:?}");
        let better = match &best {
            None => true,
            Some(b) => {
                // a converged candidate beats an unconverged one of equal cost
                cost < b.cost - 1e-12
                    || (cost <= b.cost + 1e-12
                        && status == SolveStatus::Converged
                        && b.status == SolveStatus::Unconverged)
            }
        };
        if better {
            best = Some(Solution {
                embedding: repaired,
                cost,
                status,
                raw_violation,
                repair: t,
                outer_iterations: outer,
            });
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Makes `emb` exactly feasible on `g` by mixing with private axes.
///
/// Returns the repaired embedding and the mixing weight `t`. Every cross
/// inner product is scaled by `1 − t`, so squared distances become
/// `(1 − t) d + t`; the smallest `t` fixing every spreading and triangle
/// violation is used.
fn repair(emb: &Embedding, n_total: usize, problem: &Problem) -> Result<(Embedding, f64)> {
    let vs = &problem.vs;
    let na = vs.len();
    let k = emb.shared_dim();
    let mut out = emb.clone();
    for &v in vs {
        let n2 = out.norm2(v);
        if n2 <= 0.0 {
            out.set_private(v, HALF.sqrt());
            continue;
        }
        let scale = (HALF / n2).sqrt();
        let a: Vec<f64> = out.shared(v).iter().map(|x| x * scale).collect();
        let p = out.private(v) * scale;
        out.set_point(v, &a);
        out.set_private(v, p);
    }
    let rows: Vec<&[f64]> = vs.iter().map(|&v| out.shared(v)).collect();
    let gram = gram(&rows, k);

    let half_n = n_total as f64 / 2.0;
    let mut t: f64 = 0.0;
    for i in 0..na {
        let s = 1.0 + 2.0 * (0..na).filter(|&j| j != i).map(|j| gram[i * na + j]).sum::<f64>();
        if s > half_n && s > 1.0 {
            t = t.max((s - half_n) / (s - 1.0));
        }
    }
    let h = if na <= CERTIFY_LIMIT {
        max_triangle_exhaustive(&gram, na)
    } else {
        let mut rng = seeded(0x6365_7274, 0);
        separate(&gram, na, 0.0, usize::MAX, 4 * na * na.min(4096) / 4, true, &mut rng)
            .iter()
            .map(|c| c.0)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    if h > 0.0 {
        t = t.max(h / (h + HALF));
    }
    if t == 0.0 {
        return Ok((out, 0.0));
    }
    // absorb floating error on the tight constraints
    let t = (t * (1.0 + 1e-9) + 1e-12).min(1.0);
    let keep = (1.0 - t).sqrt();
    for &v in vs {
        let a: Vec<f64> = out.shared(v).iter().map(|x| x * keep).collect();
        let p = out.private(v);
        let p = ((1.0 - t) * p * p + t * HALF).sqrt();
        out.set_point(v, &a);
        out.set_private(v, p);
    }
    Ok((out, t))
}

fn gram(rows: &[&[f64]], _k: usize) -> Vec<f64> {
    let na = rows.len();
    let mut out = vec![0.0; na * na];
    out.par_chunks_mut(na.max(1)).enumerate().for_each(|(i, row)| {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = if i == j { HALF } else { dot(rows[i], rows[j]) };
        }
    });
    out
}

/// Largest `⟨u,v⟩ + ⟨v,w⟩ − ⟨u,w⟩ − 1/2` over all distinct triples.
fn max_triangle_exhaustive(gram: &[f64], na: usize) -> f64 {
    if na < 3 {
        return f64::NEG_INFINITY;
    }
    (0..na)
        .into_par_iter()
        .map(|u| {
            let gu = &gram[u * na..(u + 1) * na];
            let mut best = f64::NEG_INFINITY;
            for w in u + 1..na {
                let gw = &gram[w * na..(w + 1) * na];
                let m = middle_max(gu, gw, u, w).0;
                best = best.max(m - gu[w] - HALF);
            }
            best
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `max_v gu[v] + gw[v]` over `v ∉ {u, w}`, with its argmax.
#[inline]
fn middle_max(gu: &[f64], gw: &[f64], u: usize, w: usize) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = usize::MAX;
    for (v, (a, b)) in gu.iter().zip(gw).enumerate() {
        let s = a + b;
        if s > best && v != u && v != w {
            best = s;
            arg = v;
        }
    }
    (best, arg)
}

/// Triangle separation: for each scanned pair `(u, w)` finds the most
/// violated middle vertex. Returns `(h, u, v, w)` with `h > threshold`,
/// most violated first, at most `budget` of them.
fn separate(
    gram: &[f64],
    na: usize,
    threshold: f64,
    budget: usize,
    pairs: usize,
    exhaustive: bool,
    rng: &mut crate::rng::Rng,
) -> Vec<(f64, usize, usize, usize)> {
    if na < 3 {
        return Vec::new();
    }
    let scan = |u: usize, w: usize, out: &mut Vec<(f64, usize, usize, usize)>| {
        let gu = &gram[u * na..(u + 1) * na];
        let gw = &gram[w * na..(w + 1) * na];
        let (m, v) = middle_max(gu, gw, u, w);
        let h = m - gu[w] - HALF;
        if h > threshold {
            out.push((h, u.min(w), v, u.max(w)));
        }
    };
    let mut found: Vec<(f64, usize, usize, usize)> = if exhaustive {
        (0..na)
            .into_par_iter()
            .map(|u| {
                let mut out = Vec::new();
                for w in u + 1..na {
                    scan(u, w, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        let sample: Vec<(usize, usize)> = (0..pairs)
            .map(|_| (rng.random_range(0..na), rng.random_range(0..na)))
            .filter(|(a, b)| a != b)
            .collect();
        sample
            .par_chunks(1024)
            .map(|chunk| {
                let mut out = Vec::new();
                for &(u, w) in chunk {
                    scan(u, w, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    found.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2, a.3).cmp(&(b.1, b.2, b.3))));
    found.dedup_by(|a, b| (a.1, a.2, a.3) == (b.1, b.2, b.3));
    found.truncate(budget);
    found
}

#[derive(Clone)]
struct Problem {
    vs: Vec<usize>,
    /// Edges in local indices.
    edges: Vec<(usize, usize)>,
    /// Local adjacency.
    adj: Vec<Vec<usize>>,
    n_total: usize,
    /// Size of the id space of the graph.
    id_space: usize,
    na: usize,
    k: usize,
}

struct Run {
    x: Vec<f64>,
    violation: ViolationReport,
    outer: usize,
    converged: bool,
}

/// Active triangle with its multiplier; `v` is the middle vertex.
#[derive(Clone, Copy)]
struct Tri {
    u: usize,
    v: usize,
    w: usize,
    mu: f64,
}

impl Problem {
    fn new(g: &Graph, n_total: usize, k: usize) -> Self {
        let vs = g.vertex_list();
        let mut pos = vec![usize::MAX; g.n_total()];
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
        let edges: Vec<(usize, usize)> = g.edges().map(|e| (pos[e.u()], pos[e.v()])).collect();
        let adj = vs
            .iter()
            .map(|&v| g.neighbors(v).iter().map(|&w| pos[w]).collect())
            .collect();
        let na = vs.len();
        Problem { vs, edges, adj, n_total, id_space: g.n_total(), na, k }
    }

    fn row<'a>(&self, x: &'a [f64], i: usize) -> &'a [f64] {
        &x[i * self.k..(i + 1) * self.k]
    }

    /// Each vertex on axis 0 or 1 according to `side`, jittered by up to
    /// `noise` on every axis.
    fn two_cluster(&self, side: &[bool], noise: f64, rng: &mut crate::rng::Rng) -> Vec<f64> {
        let mut x = vec![0.0; self.na * self.k];
        for (row, &a) in x.chunks_mut(self.k).zip(side) {
            let axis = usize::from(!a);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = noise * rng.random::<f64>() + if j == axis { 1.0 } else { 0.0 };
            }
            project_row(row, true, rng);
        }
        x
    }

    /// Two-way split read off a spreading-only solve on the whole sphere,
    /// whose low-rank landscape is far more benign than the full problem's.
    /// Both sides have at most `n_total / 2` vertices, so the split is an
    /// exactly feasible point of the full relaxation.
    fn spectral_side(
        &self,
        params: &SdpParams,
        g: &Graph,
        n_total: usize,
        rng: &mut crate::rng::Rng,
    ) -> Result<Vec<bool>> {
        let mut x: Vec<f64> = (0..self.na * self.k).map(|_| rng.random::<f64>() - 0.5).collect();
        for row in x.chunks_mut(self.k) {
            project_row(row, false, rng);
        }
        let run = self.augmented_lagrangian(x, params, SPREAD_ONLY, seeded(rng.random(), 0));
        let emb = self.to_embedding(&run.x, params.eps);
        let cut = super::round_balanced(&emb, g, n_total, 0.5, rng.random())?.cut;
        debug!("spreading-only cost {:.2}, bisection cost {}", self.raw_cost(&run.x), cut.cost());
        let mut side = vec![false; self.na];
        let mut pos = vec![usize::MAX; self.id_space];
        for (i, &v) in self.vs.iter().enumerate() {
            pos[v] = i;
        }
        for v in cut.side_a {
            side[pos[v]] = true;
        }
        Ok(side)
    }

    /// Shared part of `warm`; points living only on private axes get a
    /// random axis.
    fn start_from(&self, warm: &Embedding, rng: &mut crate::rng::Rng) -> Vec<f64> {
        let mut x = vec![0.0; self.na * self.k];
        let width = warm.shared_dim().min(self.k);
        for (i, row) in x.chunks_mut(self.k).enumerate() {
            let src = warm.shared(self.vs[i]);
            row[..width].copy_from_slice(&src[..width]);
            let norm: f64 = row.iter().map(|a| a * a).sum();
            if norm < 1e-6 {
                let axis = rng.random_range(0..self.k);
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = START_NOISE * rng.random::<f64>() + if j == axis { 1.0 } else { 0.0 };
                }
            }
            project_row(row, true, rng);
        }
        x
    }

    fn to_embedding(&self, x: &[f64], eps: f64) -> Embedding {
        let mut emb = Embedding::new(self.id_space, self.k, eps);
        for (i, &v) in self.vs.iter().enumerate() {
            emb.set_point(v, self.row(x, i));
        }
        emb
    }
}

/// Clamps negative coordinates and rescales onto the radius-`√2/2` sphere.
fn project_row(row: &mut [f64], orthant: bool, rng: &mut crate::rng::Rng) {
    if orthant {
        for a in row.iter_mut() {
            *a = a.max(0.0);
        }
    }
    let norm: f64 = row.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 1e-12 {
        row.fill(0.0);
        row[rng.random_range(0..row.len())] = HALF.sqrt();
        return;
    }
    let scale = HALF.sqrt() / norm;
    for a in row.iter_mut() {
        *a *= scale;
    }
}

#[derive(Clone, Copy)]
struct Mode {
    /// Keep coordinates nonnegative.
    orthant: bool,
    /// Enforce the triangle inequalities.
    triangles: bool,
}

const FULL: Mode = Mode { orthant: true, triangles: true };
const SPREAD_ONLY: Mode = Mode { orthant: false, triangles: false };

/// Multipliers and penalty of the augmented Lagrangian.
struct Duals {
    rho: f64,
    lambda: Vec<f64>,
    tris: Vec<Tri>,
}

impl Problem {
    fn column_sum(&self, x: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; self.k];
        for row in x.chunks(self.k) {
            for (a, b) in s.iter_mut().zip(row) {
                *a += b;
            }
        }
        s
    }

    /// Normalized spreading values `2⟨x_u, s⟩ / n − 1/2`.
    fn spreading(&self, x: &[f64], s: &[f64]) -> Vec<f64> {
        let n = self.n_total as f64;
        x.chunks(self.k).map(|row| 2.0 * dot(row, s) / n - HALF).collect()
    }

    fn raw_cost(&self, x: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|&(a, b)| 1.0 - 2.0 * dot(self.row(x, a), self.row(x, b)))
            .sum()
    }

    fn tri_value(&self, x: &[f64], t: &Tri) -> f64 {
        let (u, v, w) = (self.row(x, t.u), self.row(x, t.v), self.row(x, t.w));
        dot(u, v) + dot(v, w) - dot(u, w) - HALF
    }

    /// Augmented Lagrangian and, when `grad` is given, its Euclidean
    /// gradient (written into `grad`).
    fn lagrangian(&self, x: &[f64], duals: &Duals, grad: Option<&mut [f64]>) -> f64 {
        let k = self.k;
        let scale = 1.0 / self.edges.len().max(1) as f64;
        let rho = duals.rho;
        let s = self.column_sum(x);
        let g = self.spreading(x, &s);
        let c: Vec<f64> = g
            .iter()
            .zip(&duals.lambda)
            .map(|(&gi, &l)| (rho * gi + l).max(0.0))
            .collect();
        let tri_c: Vec<f64> = duals
            .tris
            .iter()
            .map(|t| (rho * self.tri_value(x, t) + t.mu).max(0.0))
            .collect();

        let objective: f64 = self
            .edges
            .iter()
            .map(|&(a, b)| 1.0 - 2.0 * dot(self.row(x, a), self.row(x, b)))
            .sum::<f64>()
            * scale;
        // PHR: (1/2ρ) Σ (max(0, λ + ρg)² − λ²)
        let spread_pen: f64 = c
            .iter()
            .zip(&duals.lambda)
            .map(|(ci, l)| ci * ci - l * l)
            .sum::<f64>()
            / (2.0 * rho);
        let tri_pen: f64 = tri_c
            .iter()
            .zip(&duals.tris)
            .map(|(ci, t)| ci * ci - t.mu * t.mu)
            .sum::<f64>()
            / (2.0 * rho);

        if let Some(grad) = grad {
            let n = self.n_total as f64;
            let mut cx = vec![0.0; k];
            for (row, ci) in x.chunks(k).zip(&c) {
                if *ci > 0.0 {
                    for (a, b) in cx.iter_mut().zip(row) {
                        *a += ci * b;
                    }
                }
            }
            grad.par_chunks_mut(k).enumerate().for_each(|(i, gr)| {
                gr.fill(0.0);
                for &j in &self.adj[i] {
                    for (a, b) in gr.iter_mut().zip(self.row(x, j)) {
                        *a -= 2.0 * scale * b;
                    }
                }
                for d in 0..k {
                    gr[d] += 2.0 / n * (c[i] * s[d] + cx[d]);
                }
            });
            for (t, &ci) in duals.tris.iter().zip(&tri_c) {
                if ci == 0.0 {
                    continue;
                }
                for d in 0..k {
                    let (xu, xv, xw) = (x[t.u * k + d], x[t.v * k + d], x[t.w * k + d]);
                    grad[t.u * k + d] += ci * (xv - xw);
                    grad[t.v * k + d] += ci * (xu + xw);
                    grad[t.w * k + d] += ci * (xv - xu);
                }
            }
        }
        objective + spread_pen + tri_pen
    }

    /// Projected gradient descent with backtracking on the current
    /// Lagrangian. Returns the new iterate and the final step size.
    fn minimize(
        &self,
        mut x: Vec<f64>,
        duals: &Duals,
        params: &SdpParams,
        mode: Mode,
        mut step: f64,
        rng: &mut crate::rng::Rng,
    ) -> (Vec<f64>, f64) {
        let mut grad = vec![0.0; x.len()];
        let mut value = self.lagrangian(&x, duals, Some(&mut grad));
        let mut trial = x.clone();
        for _ in 0..params.max_inner {
            let mut accepted = false;
            for _ in 0..40 {
                for (i, (t, (a, g))) in trial.iter_mut().zip(x.iter().zip(&grad)).enumerate() {
                    let _ = i;
                    *t = a - step * g;
                }
                for row in trial.chunks_mut(self.k) {
                    project_row(row, mode.orthant, rng);
                }
                let moved: f64 = trial.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum();
                let tv = self.lagrangian(&trial, duals, None);
                if tv <= value - 1e-4 * moved / step {
                    let decrease = value - tv;
                    std::mem::swap(&mut x, &mut trial);
                    value = self.lagrangian(&x, duals, Some(&mut grad));
                    accepted = true;
                    step /= params.backtrack;
                    if decrease <= 1e-10 * value.abs().max(1.0) || moved < 1e-18 {
                        return (x, step);
                    }
                    break;
                }
                step *= params.backtrack;
            }
            if !accepted {
                break;
            }
        }
        (x, step)
    }

    /// Current violations: max normalized spreading excess, and max triangle
    /// excess `h` over the active set and a fresh separation scan.
    fn violations(&self, x: &[f64], duals: &Duals) -> (f64, f64, Vec<f64>) {
        let s = self.column_sum(x);
        let g = self.spreading(x, &s);
        let spread = g.iter().copied().fold(0.0, f64::max);
        let tri = duals
            .tris
            .iter()
            .map(|t| self.tri_value(x, t))
            .fold(0.0, f64::max);
        (spread, tri, g)
    }

    fn augmented_lagrangian(
        &self,
        mut x: Vec<f64>,
        params: &SdpParams,
        mode: Mode,
        mut rng: crate::rng::Rng,
    ) -> Run {
        let mut duals = Duals { rho: params.rho0, lambda: vec![0.0; self.na], tris: Vec::new() };
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let budget = if params.triangle_budget == 0 { 10 * self.na } else { params.triangle_budget };
        let exhaustive = self.na <= params.exhaustive_limit;
        let mut step = params.step0;
        let mut prev = f64::INFINITY;
        let mut outer = 0;
        let mut viol = (f64::INFINITY, f64::INFINITY);

        // seed the active set before the first solve
        if mode.triangles {
            self.add_triangles(&x, &mut duals, &mut index, budget, params, exhaustive, &mut rng);
        }
        while outer < params.max_outer {
            outer += 1;
            let (nx, st) = self.minimize(x, &duals, params, mode, step, &mut rng);
            x = nx;
            step = st.clamp(1e-8, 1e3);
            let (spread, tri_active, g) = self.violations(&x, &duals);
            let found = if mode.triangles {
                self.add_triangles(&x, &mut duals, &mut index, budget, params, exhaustive, &mut rng)
            } else {
                0.0
            };
            let tri = tri_active.max(found);
            viol = (spread, tri);
            let worst = spread.max(2.0 * tri);
            debug!(
                "al outer {outer}: rho {:.1e} cost {:.2} spread {spread:.2e} tri {tri:.2e} active {}",
                duals.rho,
                self.raw_cost(&x),
                duals.tris.len()
            );
            if worst <= params.inner_tol {
                break;
            }
            for (l, gi) in duals.lambda.iter_mut().zip(&g) {
                *l = (*l + duals.rho * gi).max(0.0);
            }
            for t in duals.tris.iter_mut() {
                let h = {
                    let (u, v, w) = (self.row(&x, t.u), self.row(&x, t.v), self.row(&x, t.w));
                    dot(u, v) + dot(v, w) - dot(u, w) - HALF
                };
                t.mu = (t.mu + duals.rho * h).max(0.0);
            }
            if worst > 0.5 * prev {
                duals.rho = (duals.rho * 2.0).min(params.rho_max);
            }
            // forget triangles that are slack and carry no multiplier
            duals.tris.retain(|t| t.mu > 0.0 || self.tri_value(&x, t) > -0.05);
            if duals.tris.len() > 3 * budget {
                let mut keyed: Vec<(f64, f64, Tri)> =
                    duals.tris.iter().map(|t| (t.mu, self.tri_value(&x, t), *t)).collect();
                keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
                keyed.truncate(3 * budget);
                duals.tris = keyed.into_iter().map(|(_, _, t)| t).collect();
            }
            index.clear();
            for (i, t) in duals.tris.iter().enumerate() {
                index.insert((t.u, t.v, t.w), i);
            }
            prev = worst;
        }
        let converged = viol.0 <= params.eps && 2.0 * viol.1 <= params.eps;
        let violation = ViolationReport {
            norm: 0.0,
            spreading: viol.0.max(0.0) * self.n_total as f64,
            triangle: 2.0 * viol.1.max(0.0),
            worst_triangle: None,
            triples_checked: duals.tris.len() as u64,
            exhaustive,
        };
        Run { x, violation, outer, converged }
    }

    /// Separation round; returns the largest violation it found.
    #[allow(clippy::too_many_arguments)]
    fn add_triangles(
        &self,
        x: &[f64],
        duals: &mut Duals,
        index: &mut HashMap<(usize, usize, usize), usize>,
        budget: usize,
        params: &SdpParams,
        exhaustive: bool,
        rng: &mut crate::rng::Rng,
    ) -> f64 {
        let rows: Vec<&[f64]> = x.chunks(self.k).collect();
        let gram = gram(&rows, self.k);
        let found = separate(&gram, self.na, -NEAR_TIGHT, budget, params.triangle_pairs, exhaustive, rng);
        let worst = found.first().map_or(0.0, |c| c.0.max(0.0));
        for (_, u, v, w) in found {
            index.entry((u, v, w)).or_insert_with(|| {
                duals.tris.push(Tri { u, v, w, mu: 0.0 });
                duals.tris.len() - 1
            });
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = seeded(seed, 9);
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    e.push((u, v));
                }
            }
        }
        Graph::from_edges(n, e).unwrap()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = random_graph(12, 0.4, 1);
        let problem = Problem::new(&g, 12, 4);
        let mut rng = seeded(5, 5);
        let x: Vec<f64> = (0..48).map(|_| rng.random::<f64>()).collect();
        let tris = vec![
            Tri { u: 0, v: 1, w: 2, mu: 0.3 },
            Tri { u: 3, v: 1, w: 7, mu: 0.0 },
            Tri { u: 4, v: 9, w: 5, mu: 1.0 },
        ];
        let duals = Duals { rho: 3.0, lambda: (0..12).map(|i| 0.1 * i as f64).collect(), tris };
        let mut grad = vec![0.0; 48];
        problem.lagrangian(&x, &duals, Some(&mut grad));
        for i in 0..48 {
            let h = 1e-6;
            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            let fd = (problem.lagrangian(&xp, &duals, None) - problem.lagrangian(&xm, &duals, None)) / (2.0 * h);
            assert!((fd - grad[i]).abs() < 1e-5 * (1.0 + fd.abs()), "coordinate {i}: {fd} vs {}", grad[i]);
        }
    }
}
