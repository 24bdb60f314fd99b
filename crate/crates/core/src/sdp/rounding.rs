//! Sweep rounding of an embedding into a balanced two-way cut.
//!
//! Vertices are ordered by ℓ2² distance from a seed vertex (ball growing)
//! or by a random projection, and every prefix of the order whose two sides
//! both fit under the balance limit is evaluated with an incrementally
//! maintained boundary count. The cheapest such cut over all orders wins.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::Embedding;
use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::rng::seeded;

/// Ball growing from every vertex up to this many active vertices; beyond
/// it, from a seeded sample of this many.
const ALL_SEEDS_LIMIT: usize = 1024;
const PROJECTIONS: usize = 16;

#[derive(Clone, Debug)]
pub struct Rounding {
    pub cut: Cut,
    /// Number of vertex orders swept.
    pub orders: usize,
}

/// Rounds `emb` on the active vertices of `g` to the cheapest cut found
/// whose sides both have at most `⌊c_arv · n_total⌋` vertices.
pub fn round_balanced(
    emb: &Embedding,
    g: &Graph,
    n_total: usize,
    c_arv: f64,
    seed: u64,
) -> Result<Rounding> {
    let vs = g.vertex_list();
    let na = vs.len();
    if let Some(&v) = vs.iter().find(|&&v| !emb.contains(v)) {
        return Err(Error::MissingPoint(v));
    }
    let limit = (c_arv * n_total as f64 + 1e-9).floor() as usize;
    if na == 0 || na.div_ceil(2) > limit {
        return Err(Error::Unbalanceable { active: na, limit: c_arv * n_total as f64 });
    }

    let mut rng = seeded(seed, 0x726f);
    let mut orders: Vec<Vec<usize>> = Vec::new();
    let by_distance = |s: usize| {
        let mut o = vs.clone();
        let key: Vec<f64> = (0..g.n_total())
            .map(|v| if emb.contains(v) { emb.dist2_unchecked(s, v) } else { 0.0 })
            .collect();
        o.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
        o
    };
    let far = |s: usize| {
        vs.iter()
            .copied()
            .max_by(|&a, &b| emb.dist2_unchecked(s, a).total_cmp(&emb.dist2_unchecked(s, b)).then(b.cmp(&a)))
            .unwrap()
    };
    let a = far(vs[0]);
    let b = far(a);
    let mut seeds = vec![a, b];
    if na <= ALL_SEEDS_LIMIT {
        seeds.extend(vs.iter().copied().filter(|&v| v != a && v != b));
    } else {
        seeds.extend((0..ALL_SEEDS_LIMIT).map(|_| vs[rng.random_range(0..na)]));
    }
    let projections: Vec<(Vec<f64>, Vec<f64>)> = (0..PROJECTIONS)
        .map(|_| {
            let r: Vec<f64> = (0..emb.shared_dim()).map(|_| rng.sample(StandardNormal)).collect();
            let z: Vec<f64> = (0..g.n_total()).map(|_| rng.sample(StandardNormal)).collect();
            (r, z)
        })
        .collect();

    orders.extend(seeds.par_iter().map(|&s| by_distance(s)).collect::<Vec<_>>());
    for (r, z) in &projections {
        let key: Vec<f64> = (0..g.n_total())
            .map(|v| {
                if emb.contains(v) {
                    super::dot(emb.shared(v), r) + emb.private(v) * z[v]
                } else {
                    0.0
                }
            })
            .collect();
        let mut o = vs.clone();
        o.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
        orders.push(o);
    }

    let lo = na.saturating_sub(limit);
    let hi = limit.min(na);
    let best = orders
        .par_iter()
        .enumerate()
        .map(|(i, o)| {
            let (cost, size) = best_prefix(g, o, lo, hi);
            (cost, size.max(na - size), i, size)
        })
        .min_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)))
        .expect("at least one order");
    let side_a = &orders[best.2][..best.3];
    Ok(Rounding { cut: g.cut(side_a)?, orders: orders.len() })
}

/// Cheapest prefix of `order` with size in `lo..=hi`: `(boundary, size)`.
/// Ties go to the more balanced prefix, then the shorter one.
fn best_prefix(g: &Graph, order: &[usize], lo: usize, hi: usize) -> (usize, usize) {
    let na = order.len();
    let mut inside = vec![false; g.n_total()];
    let mut boundary: i64 = 0;
    let mut best = (usize::MAX, usize::MAX, 0);
    for size in 0..=na {
        if size > 0 {
            let v = order[size - 1];
            inside[v] = true;
            let nin = g.neighbors(v).iter().filter(|&&w| inside[w]).count() as i64;
            let deg = g.neighbors(v).len() as i64;
            boundary += deg - 2 * nin;
        }
        if (lo..=hi).contains(&size) {
            let key = (boundary as usize, size.max(na - size), size);
            if key < best {
                best = key;
            }
        }
    }
    (best.0, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::{extend_orthogonally, HALF};

    fn two_cliques_plus(extra: &[(usize, usize)]) -> Graph {
        let mut e: Vec<(usize, usize)> = Vec::new();
        for side in [0, 10] {
            for u in side..side + 10 {
                for v in u + 1..side + 10 {
                    e.push((u, v));
                }
            }
        }
        e.extend_from_slice(extra);
        Graph::from_edges(20, e).unwrap()
    }

    #[test]
    fn intended_solution_rounds_to_planted_cut() {
        let g = two_cliques_plus(&[(3, 14)]);
        let left: Vec<usize> = (0..10).collect();
        let emb = Embedding::intended(&g, &left).unwrap();
        let r = round_balanced(&emb, &g, 20, 0.75, 0).unwrap();
        assert_eq!(r.cut.cost(), 1);
        let mut a = r.cut.side_a.clone();
        a.sort();
        assert!(a == left || a == (10..20).collect::<Vec<_>>());
    }

    #[test]
    fn orthogonal_cliques_cost_zero() {
        let g = two_cliques_plus(&[]);
        let emb = Embedding::intended(&g, &(10..20).collect::<Vec<_>>()).unwrap();
        let r = round_balanced(&emb, &g, 20, 0.75, 3).unwrap();
        assert_eq!(r.cut.cost(), 0);
        assert!(r.cut.larger_side() <= 15);
    }

    #[test]
    fn balance_limit_enforced() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut emb = Embedding::new(4, 2, 0.0);
        for v in 0..4 {
            emb.set_point(v, &[HALF.sqrt(), 0.0]);
        }
        let r = round_balanced(&emb, &g, 4, 0.5, 0).unwrap();
        assert_eq!(r.cut.larger_side(), 2);
        assert_eq!(r.cut.cost(), 1);
        // 3 active vertices cannot be split with both sides ≤ 1
        let (g3, _) = g.remove_vertices(&[3]).unwrap();
        assert!(matches!(
            round_balanced(&emb, &g3, 2, 0.5, 0),
            Err(Error::Unbalanceable { active: 3, .. })
        ));
    }

    #[test]
    fn private_axes_are_handled() {
        let g = Graph::empty(6);
        let (g1, _) = g.remove_vertices(&[4, 5]).unwrap();
        let emb = Embedding::intended(&g1, &[0, 1]).unwrap();
        let emb = extend_orthogonally(&emb, &[4, 5]).unwrap();
        let r = round_balanced(&emb, &g, 6, 0.75, 0).unwrap();
        assert_eq!(r.cut.cost(), 0);
        assert!(r.cut.larger_side() <= 4);
    }
}
