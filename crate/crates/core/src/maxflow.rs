//! Exact integer max-flow / min-cut for the damage-control step.
//!
//! The damage network has a source, a sink and one node per active vertex.
//! A minimum s-t cut with source side `{s} ∪ Y` has value
//! `2|E(Y, Ȳ)| + budget(Ȳ) + 2βd|Y|`, so minimizing it maximizes
//! `Δ(Y) = budget(Y) − 2|E(Y, Ȳ)| − 2βd|Y|`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

const SOURCE: usize = 0;
const SINK: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
}

/// Capacitated directed network. Node 0 is the source, node 1 the sink and
/// node `i + 2` stands for `vertices[i]`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    vertices: Vec<usize>,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn source(&self) -> usize {
        SOURCE
    }

    pub fn sink(&self) -> usize {
        SINK
    }

    pub fn node_count(&self) -> usize {
        self.vertices.len() + 2
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Graph vertex represented by a non-terminal node.
    pub fn vertex_of(&self, node: usize) -> Option<usize> {
        node.checked_sub(2).and_then(|i| self.vertices.get(i).copied())
    }

    #[cfg(test)]
    fn terminal_arcs(&self) -> usize {
        self.arcs
            .iter()
            .filter(|a| a.from == SOURCE || a.to == SINK)
            .count()
    }

    #[cfg(test)]
    fn internal_arcs(&self) -> usize {
        self.arcs.len() - self.terminal_arcs()
    }
}

/// Network for `Δ(Y)` maximization: `source → u` with capacity `budget(u)`,
/// `u → sink` with capacity `2βd`, and both directions of every graph edge
/// with capacity 2.
///
/// `budgets` is indexed by vertex id over the whole id space.
pub fn build_damage_network(g: &Graph, budgets: &[i64], beta_d: i64) -> Result<FlowNetwork> {
    if beta_d < 0 {
        return Err(Error::InvalidParameter(format!("negative βd = {beta_d}")));
    }
    let vertices = g.vertex_list();
    let mut node = vec![usize::MAX; g.n_total()];
    for (i, &v) in vertices.iter().enumerate() {
        node[v] = i + 2;
    }
    let mut arcs = Vec::with_capacity(2 * vertices.len() + 2 * g.edge_count());
    for &v in &vertices {
        let budget = *budgets.get(v).ok_or(Error::UnknownVertex(v))?;
        if budget < 0 {
            return Err(Error::NegativeBudget { vertex: v, budget });
        }
        arcs.push(Arc { from: SOURCE, to: node[v], capacity: budget });
        arcs.push(Arc { from: node[v], to: SINK, capacity: 2 * beta_d });
    }
    for e in g.edges() {
        arcs.push(Arc { from: node[e.u()], to: node[e.v()], capacity: 2 });
        arcs.push(Arc { from: node[e.v()], to: node[e.u()], capacity: 2 });
    }
    Ok(FlowNetwork { vertices, arcs })
}

/// Result of a min-cut solve along with its certifying flow.
#[derive(Clone, Debug)]
pub struct MinCut {
    /// Graph vertices on the source side (minimal such set).
    pub source_side: Vec<usize>,
    pub cut_value: i64,
    /// Flow on each arc of the network, aligned with [`FlowNetwork::arcs`].
    pub flow: Vec<i64>,
}

/// Residual graph in paired-arc form: arc `2i` is forward, `2i + 1` reverse.
struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let n = net.node_count();
        let mut r = Residual {
            head: Vec::with_capacity(2 * net.arcs.len()),
            cap: Vec::with_capacity(2 * net.arcs.len()),
            out: vec![Vec::new(); n],
        };
        for a in &net.arcs {
            r.out[a.from].push(r.head.len());
            r.head.push(a.to);
            r.cap.push(a.capacity);
            r.out[a.to].push(r.head.len());
            r.head.push(a.from);
            r.cap.push(0);
        }
        r
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1; self.out.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v] {
                let w = self.head[a];
                if self.cap[a] > 0 && level[w] < 0 {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    /// Blocking flow on the level graph, with an explicit stack.
    fn blocking_flow(&mut self, s: usize, t: usize, level: &mut [i64]) -> i64 {
        let mut next = vec![0usize; self.out.len()];
        let mut total = 0;
        let mut path: Vec<usize> = Vec::new();
        loop {
            let v = path.last().map_or(s, |&a| self.head[a]);
            if v == t {
                let push = path.iter().map(|&a| self.cap[a]).min().unwrap();
                total += push;
                let mut cut_at = path.len();
                for (i, &a) in path.iter().enumerate() {
                    self.cap[a] -= push;
                    self.cap[a ^ 1] += push;
                    if self.cap[a] == 0 && cut_at == path.len() {
                        cut_at = i;
                    }
                }
                path.truncate(cut_at);
                continue;
            }
            let mut advanced = false;
            while next[v] < self.out[v].len() {
                let a = self.out[v][next[v]];
                let w = self.head[a];
                if self.cap[a] > 0 && level[w] == level[v] + 1 {
                    path.push(a);
                    advanced = true;
                    break;
                }
                next[v] += 1;
            }
            if !advanced {
                if v == s {
                    return total;
                }
                level[v] = -1;
                path.pop();
                let u = path.last().map_or(s, |&a| self.head[a]);
                next[u] += 1;
            }
        }
    }
}

/// Exact minimum s-t cut via Dinic's algorithm.
///
/// The returned source side is the set reachable from the source in the
/// final residual graph, i.e. the inclusion-minimal minimum cut. The
/// certifying flow is checked for capacity feasibility and conservation and
/// its value against the cut.
pub fn min_cut(net: &FlowNetwork) -> Result<MinCut> {
    let mut res = Residual::new(net);
    let mut value = 0;
    loop {
        let mut level = res.levels(SOURCE);
        if level[SINK] < 0 {
            break;
        }
        value += res.blocking_flow(SOURCE, SINK, &mut level);
    }
    let reach = res.levels(SOURCE);
    let in_source = |node: usize| reach[node] >= 0;
    let flow: Vec<i64> = net
        .arcs
        .iter()
        .enumerate()
        .map(|(i, a)| a.capacity - res.cap[2 * i])
        .collect();
    let cut_value: i64 = net
        .arcs
        .iter()
        .filter(|a| in_source(a.from) && !in_source(a.to))
        .map(|a| a.capacity)
        .sum();
    let source_side: Vec<usize> = (2..net.node_count())
        .filter(|&node| in_source(node))
        .filter_map(|node| net.vertex_of(node))
        .collect();

    verify_flow(net, &flow, value)?;
    if cut_value != value {
        return Err(Error::Invariant(format!(
            "max-flow {value} differs from cut capacity {cut_value}"
        )));
    }
    Ok(MinCut { source_side, cut_value, flow })
}

fn verify_flow(net: &FlowNetwork, flow: &[i64], value: i64) -> Result<()> {
    let mut excess = vec![0i64; net.node_count()];
    for (a, &f) in net.arcs.iter().zip(flow) {
        if f < 0 || f > a.capacity {
            return Err(Error::Invariant(format!(
                "flow {f} outside [0, {}] on arc {}→{}",
                a.capacity, a.from, a.to
            )));
        }
        excess[a.from] -= f;
        excess[a.to] += f;
    }
    if let Some(node) = (2..net.node_count()).find(|&v| excess[v] != 0) {
        return Err(Error::Invariant(format!(
            "flow not conserved at node {node} (excess {})",
            excess[node]
        )));
    }
    if excess[SINK] != value || excess[SOURCE] != -value {
        return Err(Error::Invariant("flow value mismatch at terminals".into()));
    }
    Ok(())
}

/// `Δ(Y) = budget(Y) − 2|E(Y, Ȳ)| − 2βd|Y|` on the active graph.
pub fn damage_gain(g: &Graph, budgets: &[i64], beta_d: i64, y: &[usize]) -> Result<i64> {
    let mask = g.mask(y)?;
    let budget: i64 = y.iter().map(|&v| budgets[v]).sum();
    let boundary = g.boundary_size_of_mask(&mask) as i64;
    Ok(budget - 2 * boundary - 2 * beta_d * y.len() as i64)
}
