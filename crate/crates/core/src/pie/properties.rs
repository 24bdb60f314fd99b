//! Instance validators for the low-degree-count and noise-neighborhood
//! structural properties.

use serde::{Deserialize, Serialize};

use super::PlantedInstance;
use crate::graph::Graph;

/// True iff at most `n/α` active vertices have `deg(u, F) < αd`.
///
/// The boundary is strict: a vertex of degree exactly `αd` is not counted.
pub fn check_property3(f: &Graph, alpha: f64, d: f64) -> bool {
    let threshold = alpha * d;
    let low = f
        .vertices()
        .filter(|&u| (f.neighbors(u).len() as f64) < threshold)
        .count();
    low as f64 <= f.n_active() as f64 / alpha
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property4Violation {
    pub vertex: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Property4Report {
    pub checked: usize,
    pub violations: Vec<Property4Violation>,
}

impl Property4Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates, for every vertex `u`, the weighted count of noise neighbors in
/// `V_H^{≥β} ∩ V_G^{≤α}` against `8/α` times the count in
/// `V_H^{≥β} \ V_G^{≤α}` plus `4 log n`, each neighbor `v` weighted by
/// `βd / deg(v, H)`.
///
/// `V_H^{≥β}` is `{v : deg(v, H) ≥ βd}` and `V_G^{≤α}` is
/// `{v : deg(v, G) < αd}`. `log_base` selects the logarithm (2 by default
/// elsewhere in the crate).
pub fn check_property4(
    inst: &PlantedInstance,
    alpha: f64,
    beta: f64,
    d: f64,
    log_base: f64,
) -> Property4Report {
    let h = inst.noise_graph();
    let g = inst.planted_graph();
    let n = inst.n();
    let bd = beta * d;
    let heavy_noise: Vec<bool> = (0..n).map(|v| h.neighbors(v).len() as f64 >= bd).collect();
    let light_planted: Vec<bool> = (0..n)
        .map(|v| (g.neighbors(v).len() as f64) < alpha * d)
        .collect();
    let additive = 4.0 * (n as f64).log(log_base);

    let mut report = Property4Report { checked: n, violations: Vec::new() };
    for u in 0..n {
        let (mut inside, mut outside) = (0.0, 0.0);
        for &v in h.neighbors(u) {
            if !heavy_noise[v] {
                continue;
            }
            let w = bd / h.neighbors(v).len() as f64;
            if light_planted[v] {
                inside += w;
            } else {
                outside += w;
            }
        }
        let rhs = 8.0 / alpha * outside + additive;
        if inside > rhs {
            report.violations.push(Property4Violation { vertex: u, lhs: inside, rhs });
        }
    }
    report
}
