//! Undirected simple graphs over a fixed id space, cuts, and edge sets.
//!
//! Vertex ids are the dense integers `0..n_total` of the original instance.
//! Deleting vertices only marks them inactive, so ids never shift and
//! per-vertex data (budgets, ground truth, embeddings) stays aligned.
//! Mutating operations return a fresh snapshot and leave `self` untouched.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered vertex pair stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(usize, usize);

impl Edge {
    /// Canonical edge between two distinct vertices.
    ///
    /// Panics if `a == b`; use [`Edge::try_new`] for untrusted input.
    pub fn new(a: usize, b: usize) -> Self {
        Self::try_new(a, b).expect("self-loop edge")
    }

    pub fn try_new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(Error::InvalidEdge(a, b, "self-loop")),
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: usize) -> usize {
        if x == self.0 {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }
}

/// A set of canonical edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Returns false if the edge was already present.
    pub fn insert(&mut self, e: Edge) -> bool {
        self.0.insert(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.0.iter()
    }

    pub fn extend_from(&mut self, other: &EdgeSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn intersection_count(&self, other: &EdgeSet) -> usize {
        self.0.intersection(&other.0).count()
    }

    /// Number of edges incident on `v`.
    pub fn incident_count(&self, v: usize) -> usize {
        self.0.iter().filter(|e| e.touches(v)).count()
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl IntoIterator for EdgeSet {
    type Item = Edge;
    type IntoIter = std::collections::btree_set::IntoIter<Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Undirected simple graph with stable vertex ids and an active-vertex mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    active: Vec<bool>,
    n_active: usize,
    /// Sorted neighbor lists; empty for inactive vertices.
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph with all `n` vertices active.
    pub fn empty(n: usize) -> Self {
        Graph {
            active: vec![true; n],
            n_active: n,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// endpoints and duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidEdge(a, b, "endpoint out of range"));
            }
            let e = Edge::try_new(a, b)?;
            if !set.insert(e) {
                return Err(Error::InvalidEdge(a, b, "duplicate edge"));
            }
        }
        Ok(Self::from_sorted_set(n, &set))
    }

    /// Builds a graph from canonical edges; endpoints must be `< n`.
    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Result<Self> {
        if let Some(e) = edges.iter().find(|e| e.v() >= n) {
            return Err(Error::InvalidEdge(e.u(), e.v(), "endpoint out of range"));
        }
        Ok(Self::from_sorted_set(n, &edges.0))
    }

    fn from_sorted_set(n: usize, set: &BTreeSet<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in set {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            active: vec![true; n],
            n_active: n,
            adj,
            edge_count: set.len(),
        }
    }

    /// Size of the original id space.
    pub fn n_total(&self) -> usize {
        self.active.len()
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.active.get(v).copied().unwrap_or(false)
    }

    /// Active vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.active
            .iter()
            .enumerate()
            .filter_map(|(v, &a)| a.then_some(v))
    }

    pub fn vertex_list(&self) -> Vec<usize> {
        self.vertices().collect()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if !self.is_active(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.adj[v].len())
    }

    /// Sorted neighbor ids of `v` (empty for inactive or unknown ids).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.adj.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n_total() && self.adj[a].binary_search(&b).is_ok()
    }

    /// All edges in canonical ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| Edge(u, v))
        })
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    /// Membership mask over the id space; errors on inactive members.
    pub fn mask(&self, s: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n_total()];
        for &v in s {
            if !self.is_active(v) {
                return Err(Error::UnknownVertex(v));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Edges with exactly one endpoint in `s`.
    pub fn edge_boundary(&self, s: &[usize]) -> Result<EdgeSet> {
        let mask = self.mask(s)?;
        Ok(self.boundary_of_mask(&mask))
    }

    pub(crate) fn boundary_of_mask(&self, mask: &[bool]) -> EdgeSet {
        let mut out = EdgeSet::new();
        for (u, list) in self.adj.iter().enumerate() {
            if !mask[u] {
                continue;
            }
            for &v in list {
                if !mask[v] {
                    out.insert(Edge::new(u, v));
                }
            }
        }
        out
    }

    /// Number of boundary edges of a mask, without materializing them.
    pub(crate) fn boundary_size_of_mask(&self, mask: &[bool]) -> usize {
        self.adj
            .iter()
            .enumerate()
            .filter(|(u, _)| mask[*u])
            .map(|(_, list)| list.iter().filter(|&&v| !mask[v]).count())
            .sum()
    }

    /// Deletes the vertices in `s`. Returns the new graph and the boundary
    /// of `s` (the cut edges). Edges internal to `s` are removed but not
    /// reported.
    pub fn remove_vertices(&self, s: &[usize]) -> Result<(Graph, EdgeSet)> {
        let mask = self.mask(s)?;
        Ok(self.remove_mask(&mask))
    }

    pub(crate) fn remove_mask(&self, mask: &[bool]) -> (Graph, EdgeSet) {
        let cut = self.boundary_of_mask(mask);
        let mut g = self.clone();
        let mut removed_edges = 0;
        for u in 0..g.n_total() {
            if mask[u] {
                removed_edges += g.adj[u].iter().filter(|&&v| !mask[v] || v > u).count();
                g.adj[u].clear();
                g.active[u] = false;
                g.n_active -= 1;
            } else {
                g.adj[u].retain(|&v| !mask[v]);
            }
        }
        g.edge_count -= removed_edges;
        (g, cut)
    }

    /// Deletes the given edges. Every edge must be present.
    pub fn remove_edges(&self, e: &EdgeSet) -> Result<Graph> {
        if let Some(missing) = e.iter().find(|x| !self.has_edge(x.u(), x.v())) {
            return Err(Error::MissingEdge(missing.u(), missing.v()));
        }
        let mut g = self.clone();
        for x in e {
            g.adj[x.u()].retain(|&w| w != x.v());
            g.adj[x.v()].retain(|&w| w != x.u());
        }
        g.edge_count -= e.len();
        Ok(g)
    }

    /// Cut of the active vertex set with `side_a` on one side.
    pub fn cut(&self, side_a: &[usize]) -> Result<Cut> {
        let mask = self.mask(side_a)?;
        let side_b = self.vertices().filter(|&v| !mask[v]).collect();
        let mut side_a = side_a.to_vec();
        side_a.sort_unstable();
        side_a.dedup();
        Ok(Cut {
            side_a,
            side_b,
            crossing_edges: self.boundary_of_mask(&mask),
        })
    }

    /// Serializes to the edge-list text format: `n m` then `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n_total(), self.edge_count).unwrap();
        for e in self.edges() {
            writeln!(out, "{} {}", e.u(), e.v()).unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            if u >= v || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 0 <= u < v < {n}, got {u} {v}"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        Self::parse_edge_list(&fs::read_to_string(path)?)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected two non-negative integers, got {text:?}"),
        }),
    }
}

/// A two-sided partition of a graph's active vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub crossing_edges: EdgeSet,
}

impl Cut {
    pub fn cost(&self) -> usize {
        self.crossing_edges.len()
    }

    pub fn larger_side(&self) -> usize {
        self.side_a.len().max(self.side_b.len())
    }

    pub fn smaller_side(&self) -> usize {
        self.side_a.len().min(self.side_b.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    fn k33() -> Graph {
        let edges = (0..3).flat_map(|u| (3..6).map(move |v| (u, v)));
        Graph::from_edges(6, edges).unwrap()
    }

    #[test]
    fn degrees() {
        let isolated = Graph::empty(3);
        assert_eq!(isolated.degree(1).unwrap(), 0);

        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert_eq!(star.degree(0).unwrap(), 5);

        let k7 = complete(7);
        assert!(k7.vertices().all(|v| k7.degree(v).unwrap() == 6));
        assert!(matches!(k7.degree(7), Err(Error::UnknownVertex(7))));
    }

    #[test]
    fn boundaries() {
        let k7 = complete(7);
        let all: Vec<_> = k7.vertices().collect();
        assert!(k7.edge_boundary(&all).unwrap().is_empty());
        assert!(k7.edge_boundary(&[]).unwrap().is_empty());

        let single = Graph::from_edges(2, [(0, 1)]).unwrap();
        let b = single.edge_boundary(&[0]).unwrap();
        assert_eq!(b.iter().copied().collect::<Vec<_>>(), vec![Edge::new(0, 1)]);

        assert_eq!(k33().edge_boundary(&[0, 1, 2]).unwrap().len(), 9);
    }

    #[test]
    fn vertex_removal() {
        let g = k33();
        let (same, cut) = g.remove_vertices(&[]).unwrap();
        assert_eq!(same, g);
        assert!(cut.is_empty());

        let lone = Graph::from_edges(2, [(0, 1)]).unwrap();
        let (empty, cut) = lone.remove_vertices(&[0, 1]).unwrap();
        assert_eq!(empty.n_active(), 0);
        assert_eq!(empty.edge_count(), 0);
        assert!(cut.is_empty());

        let (rest, cut) = g.remove_vertices(&[0, 1, 2]).unwrap();
        assert_eq!(cut.len(), 9);
        assert_eq!(rest.n_active(), 3);
        assert_eq!(rest.edge_count(), 0);
        assert!((3..6).all(|v| rest.degree(v).unwrap() == 0));
        assert!(rest.degree(0).is_err());

        assert!(rest.remove_vertices(&[0]).is_err());
    }

    #[test]
    fn edge_removal() {
        let tri = complete(3);
        assert_eq!(tri.remove_edges(&EdgeSet::new()).unwrap(), tri);

        let bare = tri.remove_edges(&tri.edge_set()).unwrap();
        assert_eq!(bare.edge_count(), 0);
        assert_eq!(bare.n_active(), 3);

        let path = tri
            .remove_edges(&[Edge::new(0, 2)].into_iter().collect())
            .unwrap();
        assert_eq!(path.edge_count(), 2);
        assert_eq!(path.degree(1).unwrap(), 2);
        assert_eq!(path.degree(0).unwrap(), 1);

        let res = path.remove_edges(&[Edge::new(0, 2)].into_iter().collect());
        assert!(matches!(res, Err(Error::MissingEdge(0, 2))));
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("3 1\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 x\n").is_err());
        let g = Graph::parse_edge_list("4 2\n0 1\n2 3\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.to_edge_list(), "4 2\n0 1\n2 3\n");
    }

    #[test]
    fn cut_sides() {
        let g = k33();
        let cut = g.cut(&[0, 1, 2]).unwrap();
        assert_eq!(cut.side_b, vec![3, 4, 5]);
        assert_eq!(cut.cost(), 9);
    }
}
