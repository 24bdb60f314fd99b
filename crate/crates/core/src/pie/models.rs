//! Graph families used for the planted graph and the noise graph.
//!
//! Planted builders produce graphs on the canonical sides `0..n/2` and
//! `n/2..n` with no edge between them. Noise builders produce arbitrary
//! graphs on `0..n` whose canonical sides are the same halves.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet};
use crate::rng::Rng;

/// Random `degree`-regular simple graph on `vertices`, by random stub
/// pairing with restarts when the pairing gets stuck.
pub fn random_regular(vertices: &[usize], degree: usize, rng: &mut Rng) -> Result<EdgeSet> {
    let s = vertices.len();
    if degree == 0 {
        return Ok(EdgeSet::new());
    }
    if degree >= s {
        return Err(Error::InfeasibleModel(format!(
            "regular degree {degree} must be below the side size {s}"
        )));
    }
    if (degree * s) % 2 != 0 {
        return Err(Error::InfeasibleModel(format!(
            "degree {degree} times side size {s} must be even"
        )));
    }
    'restart: for _ in 0..1000 {
        let mut stubs: Vec<usize> = (0..s).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
        let mut edges = BTreeSet::new();
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..64 {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                let (a, b) = (stubs[i], stubs[j]);
                if i != j && a != b && !edges.contains(&Edge::new(a, b)) {
                    edges.insert(Edge::new(a, b));
                    let (hi, lo) = (i.max(j), i.min(j));
                    stubs.swap_remove(hi);
                    stubs.swap_remove(lo);
                    placed = true;
                    break;
                }
            }
            if placed {
                continue;
            }
            let valid: Vec<(usize, usize)> = (0..stubs.len())
                .flat_map(|i| (i + 1..stubs.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| {
                    stubs[i] != stubs[j] && !edges.contains(&Edge::new(stubs[i], stubs[j]))
                })
                .collect();
            let Some(&(i, j)) = valid.choose(rng) else {
                continue 'restart;
            };
            edges.insert(Edge::new(stubs[i], stubs[j]));
            stubs.swap_remove(j);
            stubs.swap_remove(i);
        }
        return Ok(edges
            .into_iter()
            .map(|e| Edge::new(vertices[e.u()], vertices[e.v()]))
            .collect());
    }
    Err(Error::InfeasibleModel(format!(
        "could not sample a {degree}-regular graph on {s} vertices"
    )))
}

/// Near-square grid on `vertices` (row-major), the path when the size is prime.
pub fn grid(vertices: &[usize]) -> EdgeSet {
    let s = vertices.len();
    if s == 0 {
        return EdgeSet::new();
    }
    let rows = (1..=s).take_while(|r| r * r <= s).filter(|r| s % r == 0).max().unwrap_or(1);
    let cols = s / rows;
    let mut edges = EdgeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                edges.insert(Edge::new(vertices[i], vertices[i + 1]));
            }
            if r + 1 < rows {
                edges.insert(Edge::new(vertices[i], vertices[i + cols]));
            }
        }
    }
    edges
}

pub fn clique(vertices: &[usize]) -> EdgeSet {
    let mut edges = EdgeSet::new();
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            edges.insert(Edge::new(a, b));
        }
    }
    edges
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")))
    }
}

/// G(n, p).
pub fn erdos_renyi(n: usize, p: f64, rng: &mut Rng) -> Result<EdgeSet> {
    check_probability("p", p)?;
    let mut edges = EdgeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.insert(Edge::new(u, v));
            }
        }
    }
    Ok(edges)
}

/// Each pair across the canonical halves independently with probability `q`.
pub fn bipartite_crossing(n: usize, q: f64, rng: &mut Rng) -> Result<EdgeSet> {
    check_probability("q", q)?;
    let half = n / 2;
    let mut edges = EdgeSet::new();
    for u in 0..half {
        for v in half..n {
            if rng.random_bool(q) {
                edges.insert(Edge::new(u, v));
            }
        }
    }
    Ok(edges)
}

/// Barabási–Albert preferential attachment: a clique on the first `m + 1`
/// vertices, then every later vertex attaches to `m` distinct earlier
/// vertices chosen proportionally to degree. Vertex order is shuffled so the
/// hubs are not all on one canonical side.
pub fn preferential_attachment(n: usize, m: usize, rng: &mut Rng) -> Result<EdgeSet> {
    if m == 0 || m >= n {
        return Err(Error::InfeasibleModel(format!(
            "preferential attachment needs 0 < m < n, got m = {m}, n = {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    let mut endpoints: Vec<usize> = Vec::new();
    for i in 0..=m {
        for j in i + 1..=m {
            edges.insert(Edge::new(i, j));
            endpoints.extend([i, j]);
        }
    }
    for v in m + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(endpoints[rng.random_range(0..endpoints.len())]);
        }
        for t in targets {
            edges.insert(Edge::new(v, t));
            endpoints.extend([v, t]);
        }
    }
    Ok(edges
        .into_iter()
        .map(|e| Edge::new(order[e.u()], order[e.v()]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::seeded;

    #[test]
    fn regular_graphs_are_regular_and_simple() {
        let vertices: Vec<usize> = (100..228).collect();
        let mut rng = seeded(3, 0);
        let edges = random_regular(&vertices, 8, &mut rng).unwrap();
        assert_eq!(edges.len(), 128 * 8 / 2);
        let g = Graph::from_edge_set(228, &edges).unwrap();
        assert!(vertices.iter().all(|&v| g.degree(v).unwrap() == 8));
        assert!((0..100).all(|v| g.degree(v).unwrap() == 0));
    }

    #[test]
    fn regular_degree_too_large() {
        let vertices: Vec<usize> = (0..4).collect();
        assert!(random_regular(&vertices, 4, &mut seeded(0, 0)).is_err());
        assert!(random_regular(&(0..5).collect::<Vec<_>>(), 3, &mut seeded(0, 0)).is_err());
    }

    #[test]
    fn grid_shape() {
        // 3 x 4 grid: 3 * 3 horizontal + 2 * 4 vertical edges.
        assert_eq!(grid(&(0..12).collect::<Vec<_>>()).len(), 17);
        // prime size becomes a path
        assert_eq!(grid(&(0..7).collect::<Vec<_>>()).len(), 6);
    }

    #[test]
    fn attachment_edge_count() {
        let edges = preferential_attachment(50, 3, &mut seeded(1, 0)).unwrap();
        assert_eq!(edges.len(), 6 + 3 * (50 - 4));
        assert!(preferential_attachment(5, 5, &mut seeded(1, 0)).is_err());
    }

    #[test]
    fn probabilities_validated() {
        assert!(erdos_renyi(4, 1.5, &mut seeded(0, 0)).is_err());
        assert_eq!(bipartite_crossing(4, 1.0, &mut seeded(0, 0)).unwrap().len(), 4);
    }
}
