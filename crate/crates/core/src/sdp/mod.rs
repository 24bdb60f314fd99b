//! Vector relaxation of Balanced Cut.
//!
//! Every active vertex `u` gets a point `φ(u)` with `‖φ(u)‖² = 1/2`, subject
//! to the spreading constraint `Σ_v (1 − ‖φ(u) − φ(v)‖²) ≤ n/2` (with `n` the
//! size of the original instance) and the ℓ2² triangle inequality. The
//! objective is `Σ_{(u,v)∈E} ‖φ(u) − φ(v)‖²`.
//!
//! Points are stored as a shared block of `k` coordinates plus, per vertex,
//! a magnitude on a private axis orthogonal to everything else. Private axes
//! make orthogonal extension free and are also what the solver uses to
//! repair small constraint violations exactly.

mod rounding;
mod solver;

use std::fmt::Write as _;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::seeded;

pub use rounding::{round_balanced, Rounding};
pub use solver::{solve, solve_with_warm_start, SdpParams, Solution, SolveStatus};

/// Squared norm every point must have.
pub const HALF: f64 = 0.5;

/// Above this many active vertices the triangle scan is sampled.
pub const EXHAUSTIVE_TRIANGLE_LIMIT: usize = 300;
pub const SAMPLED_TRIANGLES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    k: usize,
    shared: Vec<f64>,
    private: Vec<f64>,
    present: Vec<bool>,
    /// Feasibility slack the embedding is certified at.
    pub tolerance: f64,
}

impl Embedding {
    /// Embedding over `n_total` ids with no points yet.
    pub fn new(n_total: usize, k: usize, tolerance: f64) -> Self {
        Embedding {
            k,
            shared: vec![0.0; n_total * k],
            private: vec![0.0; n_total],
            present: vec![false; n_total],
            tolerance,
        }
    }

    /// The integral two-point solution: `e₁/√2` on `left`, `e₂/√2` on the
    /// remaining active vertices of `g`.
    pub fn intended(g: &Graph, left: &[usize]) -> Result<Self> {
        let mask = g.mask(left)?;
        let mut emb = Embedding::new(g.n_total(), 2, 0.0);
        let r = HALF.sqrt();
        for v in g.vertices() {
            let p = if mask[v] { [r, 0.0] } else { [0.0, r] };
            emb.set_point(v, &p);
        }
        Ok(emb)
    }

    pub fn n_total(&self) -> usize {
        self.present.len()
    }

    /// Width of the shared coordinate block.
    pub fn shared_dim(&self) -> usize {
        self.k
    }

    /// Total dimension: shared coordinates plus used private axes.
    pub fn dim(&self) -> usize {
        self.k + self.private.iter().filter(|&&p| p != 0.0).count()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(v, &p)| p.then_some(v))
    }

    pub fn len(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shared coordinates of `v`.
    pub fn shared(&self, v: usize) -> &[f64] {
        &self.shared[v * self.k..(v + 1) * self.k]
    }

    /// Magnitude of `v` on its private axis.
    pub fn private(&self, v: usize) -> f64 {
        self.private[v]
    }

    /// Places `v` at `coords` in the shared block (zero-padded to `k`).
    pub fn set_point(&mut self, v: usize, coords: &[f64]) {
        assert!(coords.len() <= self.k, "point wider than the shared block");
        let row = &mut self.shared[v * self.k..(v + 1) * self.k];
        row.fill(0.0);
        row[..coords.len()].copy_from_slice(coords);
        self.private[v] = 0.0;
        self.present[v] = true;
    }

    pub(crate) fn set_private(&mut self, v: usize, magnitude: f64) {
        self.private[v] = magnitude;
    }

    fn require(&self, v: usize) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::MissingPoint(v))
        }
    }

    /// `‖φ(v)‖²`.
    pub fn norm2(&self, v: usize) -> f64 {
        let a = self.shared(v);
        a.iter().map(|x| x * x).sum::<f64>() + self.private[v] * self.private[v]
    }

    /// `⟨φ(u), φ(v)⟩`.
    pub fn inner(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return self.norm2(u);
        }
        dot(self.shared(u), self.shared(v))
    }

    /// `‖φ(u) − φ(v)‖²` without presence checks.
    pub(crate) fn dist2_unchecked(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        let (a, b) = (self.shared(u), self.shared(v));
        let shared: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        shared + self.private[u] * self.private[u] + self.private[v] * self.private[v]
    }

    pub fn dist2(&self, u: usize, v: usize) -> Result<f64> {
        self.require(u)?;
        self.require(v)?;
        Ok(self.dist2_unchecked(u, v))
    }

    /// Copy keeping only the active vertices of `g`.
    pub fn restrict(&self, g: &Graph) -> Result<Embedding> {
        let mut out = self.clone();
        out.present.fill(false);
        for v in g.vertices() {
            self.require(v)?;
            out.present[v] = true;
        }
        for v in 0..out.n_total() {
            if !out.present[v] {
                out.shared[v * self.k..(v + 1) * self.k].fill(0.0);
                out.private[v] = 0.0;
            }
        }
        Ok(out)
    }

    /// Diagnostic dump: one line `id x₁ … x_k` per embedded vertex, with the
    /// used private axes written out explicitly after the shared block.
    pub fn to_dump(&self) -> String {
        let private_axes: Vec<usize> = self.vertices().filter(|&v| self.private[v] != 0.0).collect();
        let mut out = String::new();
        for v in self.vertices() {
            write!(out, "{v}").unwrap();
            for x in self.shared(v) {
                write!(out, " {x}").unwrap();
            }
            for &w in &private_axes {
                let x = if w == v { self.private[v] } else { 0.0 };
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ_{(u,v)∈E} ‖φ(u) − φ(v)‖²` over the edges of `g`.
pub fn sdp_cost(emb: &Embedding, g: &Graph) -> Result<f64> {
    if let Some(v) = g.vertices().find(|&v| !emb.contains(v)) {
        return Err(Error::MissingPoint(v));
    }
    Ok(g.edges().map(|e| emb.dist2_unchecked(e.u(), e.v())).sum())
}

pub fn edge_length(emb: &Embedding, u: usize, v: usize) -> Result<f64> {
    emb.dist2(u, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeClass {
    Short,
    Long,
}

/// Short iff the squared length is at most `threshold`.
pub fn classify(emb: &Embedding, u: usize, v: usize, threshold: f64) -> Result<EdgeClass> {
    Ok(if emb.dist2(u, v)? <= threshold {
        EdgeClass::Short
    } else {
        EdgeClass::Long
    })
}

/// Worst violation of each constraint family, in absolute units.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// `max_u |‖φ(u)‖² − 1/2|`.
    pub norm: f64,
    /// `max_u max(0, Σ_v (1 − ‖φ(u) − φ(v)‖²) − n/2)`.
    pub spreading: f64,
    /// `max max(0, d(u,w) − d(u,v) − d(v,w))` over the scanned triples.
    pub triangle: f64,
    pub worst_triangle: Option<(usize, usize, usize)>,
    pub triples_checked: u64,
    pub exhaustive: bool,
}

impl ViolationReport {
    /// Embedding invariants at slack `eps`: norm and triangle within `eps`,
    /// spreading within `eps · n`.
    pub fn within(&self, eps: f64, n_total: usize) -> bool {
        self.norm <= eps && self.spreading <= eps * n_total as f64 && self.triangle <= eps
    }

    pub fn max_abs(&self) -> f64 {
        self.norm.max(self.spreading).max(self.triangle)
    }
}

/// Full feasibility scan of `emb` on the active vertices of `g`.
///
/// Triangles are scanned exhaustively up to [`EXHAUSTIVE_TRIANGLE_LIMIT`]
/// vertices and on a fixed-seed sample of [`SAMPLED_TRIANGLES`] triples
/// beyond.
pub fn check_feasibility(emb: &Embedding, g: &Graph, n_total: usize) -> ViolationReport {
    let vs: Vec<usize> = g.vertices().filter(|&v| emb.contains(v)).collect();
    let na = vs.len();
    let mut report = ViolationReport::default();
    for &u in &vs {
        report.norm = report.norm.max((emb.norm2(u) - HALF).abs());
    }
    let dist: Vec<f64> = vs
        .iter()
        .flat_map(|&u| vs.iter().map(move |&v| emb.dist2_unchecked(u, v)))
        .collect();
    let d = |i: usize, j: usize| dist[i * na + j];
    for i in 0..na {
        let spread: f64 = (0..na).map(|j| 1.0 - d(i, j)).sum();
        report.spreading = report.spreading.max(spread - n_total as f64 / 2.0);
    }
    report.spreading = report.spreading.max(0.0);

    let mut worst = 0.0;
    let mut record = |i: usize, j: usize, w: usize, report: &mut ViolationReport| {
        // middle vertex j
        let viol = d(i, w) - d(i, j) - d(j, w);
        if viol > worst {
            worst = viol;
            report.worst_triangle = Some((vs[i], vs[j], vs[w]));
        }
    };
    if na <= EXHAUSTIVE_TRIANGLE_LIMIT {
        report.exhaustive = true;
        for i in 0..na {
            for w in i + 1..na {
                for j in 0..na {
                    if j != i && j != w {
                        record(i, j, w, &mut report);
                    }
                }
            }
        }
        report.triples_checked = (na as u64 * na.saturating_sub(1) as u64 * na.saturating_sub(2) as u64) / 2;
    } else {
        let mut rng = seeded(0x7472_6961, 0);
        for _ in 0..SAMPLED_TRIANGLES {
            let (i, j, w) = (
                rng.random_range(0..na),
                rng.random_range(0..na),
                rng.random_range(0..na),
            );
            if i != j && j != w && i != w {
                record(i, j, w, &mut report);
            }
        }
        report.triples_checked = SAMPLED_TRIANGLES as u64;
    }
    report.triangle = worst;
    report
}

/// Adds every vertex of `removed` on its own fresh axis at radius `√2/2`, so
/// its squared distance to every other point is 1.
pub fn extend_orthogonally(emb: &Embedding, removed: &[usize]) -> Result<Embedding> {
    let mut out = emb.clone();
    for &v in removed {
        if v >= out.n_total() {
            return Err(Error::UnknownVertex(v));
        }
        if out.present[v] {
            return Err(Error::InvalidParameter(format!("vertex {v} is already embedded")));
        }
        out.present[v] = true;
        out.private[v] = HALF.sqrt();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    macro_rules! assert_relative_eq {
        ($a:expr, $b:expr, epsilon = $e:expr) => {{
            let (a, b): (f64, f64) = ($a, $b);
            assert!((a - b).abs() <= $e, "{a} != {b}");
        }};
    }

    fn four_cycle() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    #[test]
    fn cost_examples() {
        let g = four_cycle();
        let mut same = Embedding::new(4, 2, 0.0);
        for v in 0..4 {
            same.set_point(v, &[HALF.sqrt(), 0.0]);
        }
        assert_eq!(sdp_cost(&same, &g).unwrap(), 0.0);

        let intended = Embedding::intended(&g, &[0, 2]).unwrap();
        assert_relative_eq!(sdp_cost(&intended, &g).unwrap(), 4.0, epsilon = 1e-12);
        let intended = Embedding::intended(&g, &[0, 1]).unwrap();
        assert_relative_eq!(sdp_cost(&intended, &g).unwrap(), 2.0, epsilon = 1e-12);

        let single = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mut emb = Embedding::new(2, 1, 0.0);
        emb.set_point(0, &[0.0]);
        emb.set_point(1, &[0.3f64.sqrt()]);
        assert_relative_eq!(sdp_cost(&emb, &single).unwrap(), 0.3, epsilon = 1e-12);

        let partial = Embedding::new(2, 1, 0.0);
        assert!(matches!(sdp_cost(&partial, &single), Err(Error::MissingPoint(0))));
    }

    #[test]
    fn edge_classes() {
        let g = Graph::empty(3);
        let emb = Embedding::intended(&g, &[0, 1]).unwrap();
        assert_eq!(edge_length(&emb, 0, 1).unwrap(), 0.0);
        assert_eq!(classify(&emb, 0, 1, 0.0).unwrap(), EdgeClass::Short);
        assert_relative_eq!(edge_length(&emb, 0, 2).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(classify(&emb, 0, 2, 1.0 / 24.0).unwrap(), EdgeClass::Long);
        let len = edge_length(&emb, 0, 2).unwrap();
        assert_eq!(classify(&emb, 0, 2, len).unwrap(), EdgeClass::Short);
        assert!(classify(&Embedding::new(3, 2, 0.0), 0, 1, 1.0).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let g = four_cycle();
        let intended = Embedding::intended(&g, &[0, 2]).unwrap();
        let r = check_feasibility(&intended, &g, 4);
        assert!(r.norm < 1e-15 && r.spreading < 1e-12 && r.triangle < 1e-12);
        assert!(r.exhaustive);

        let mut same = Embedding::new(6, 1, 0.0);
        for v in 0..6 {
            same.set_point(v, &[HALF.sqrt()]);
        }
        let r = check_feasibility(&same, &Graph::empty(6), 6);
        assert_relative_eq!(r.spreading, 3.0, epsilon = 1e-12);

        // d(0,2) = d(0,1) + d(1,2) exactly: equality, no violation
        let h = HALF.sqrt() / 2.0;
        let mut line = Embedding::new(3, 3, 0.0);
        line.set_point(0, &[HALF.sqrt(), 0.0, 0.0]);
        line.set_point(2, &[0.0, HALF.sqrt(), 0.0]);
        line.set_point(1, &[h, h, 0.5]);
        let r = check_feasibility(&line, &Graph::empty(3), 3);
        assert!(r.triangle < 1e-12 && r.norm < 1e-12);

        // pulling the middle point off the segment breaks it
        line.set_point(1, &[0.5, 0.5, 0.0]);
        let (d01, d12, d02) = (
            line.dist2(0, 1).unwrap(),
            line.dist2(1, 2).unwrap(),
            line.dist2(0, 2).unwrap(),
        );
        let r = check_feasibility(&line, &Graph::empty(3), 3);
        assert_relative_eq!(r.triangle, d02 - d01 - d12, epsilon = 1e-12);
        assert_eq!(r.worst_triangle, Some((0, 1, 2)));
    }

    #[test]
    fn orthogonal_extension() {
        let g = Graph::empty(4);
        let emb = Embedding::intended(&g.remove_vertices(&[2, 3]).unwrap().0, &[0]).unwrap();
        assert_eq!(extend_orthogonally(&emb, &[]).unwrap(), emb);
        let ext = extend_orthogonally(&emb, &[2, 3]).unwrap();
        for v in [0, 1, 3] {
            assert_relative_eq!(ext.dist2(2, v).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(ext.norm2(3), HALF, epsilon = 1e-12);
        assert_eq!(ext.dim(), 4);
        assert!(extend_orthogonally(&ext, &[2]).is_err());
    }

    #[test]
    fn dump_format() {
        let emb = extend_orthogonally(&Embedding::intended(&Graph::empty(1), &[0]).unwrap(), &[]).unwrap();
        assert_eq!(emb.to_dump().lines().count(), 1);
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (g1, _) = g.remove_vertices(&[1]).unwrap();
        let ext = extend_orthogonally(&Embedding::intended(&g1, &[0]).unwrap(), &[1]).unwrap();
        let dump = ext.to_dump();
        let rows: Vec<Vec<&str>> = dump.lines().map(|l| l.split(' ').collect()).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.len() == 1 + ext.dim()));
    }
}
