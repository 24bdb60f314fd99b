//! Per-vertex budgets, the extra budget and the ledger of cut edges.

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeSet, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    LongEdges,
    HeavyVertices,
    DamageControl,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub iteration: usize,
    pub step: Step,
    pub edges: EdgeSet,
}

/// Budget accounting for one run.
///
/// Vertex budgets are integers indexed by vertex id; entries of removed
/// vertices are kept but no longer count towards the total.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetState {
    pub budgets: Vec<i64>,
    pub initial: Vec<i64>,
    pub extra_budget: f64,
    pub ledger: Vec<LedgerEntry>,
}

impl BudgetState {
    /// `⌈βd⌉` for vertices with `deg(u, F) ≥ αd`, `⌈αd⌉` for the rest, and an
    /// extra budget of `3nd/δ`.
    pub fn allocate(f: &Graph, d: f64, alpha: f64, beta: f64, delta: f64) -> Self {
        let high = (beta * d).ceil() as i64;
        let low = (alpha * d).ceil() as i64;
        let budgets: Vec<i64> = (0..f.n_total())
            .map(|v| {
                if !f.is_active(v) {
                    0
                } else if f.neighbors(v).len() as f64 >= alpha * d {
                    high
                } else {
                    low
                }
            })
            .collect();
        BudgetState {
            initial: budgets.clone(),
            budgets,
            extra_budget: 3.0 * f.n_total() as f64 * d / delta,
            ledger: Vec::new(),
        }
    }

    pub fn budget(&self, v: usize) -> i64 {
        self.budgets[v]
    }

    pub fn budget_of(&self, vs: impl IntoIterator<Item = usize>) -> i64 {
        vs.into_iter().map(|v| self.budgets[v]).sum()
    }

    /// Active vertex budgets plus the extra budget.
    pub fn total(&self, g: &Graph) -> f64 {
        self.budget_of(g.vertices()) as f64 + self.extra_budget
    }

    /// Records a cut and credits `+1` per cut edge to each endpoint still
    /// active in `survivors`; long-edge cuts also draw 3 per edge from the
    /// extra budget.
    pub fn charge(&mut self, iteration: usize, step: Step, edges: EdgeSet, survivors: &Graph) {
        for e in edges.iter() {
            for v in [e.u(), e.v()] {
                if survivors.is_active(v) {
                    self.budgets[v] += 1;
                }
            }
        }
        if step == Step::LongEdges {
            self.extra_budget -= 3.0 * edges.len() as f64;
        }
        self.ledger.push(LedgerEntry { iteration, step, edges });
    }

    /// Cut edges over all ledger entries.
    pub fn cut_count(&self) -> usize {
        self.ledger.iter().map(|e| e.edges.len()).sum()
    }

    pub fn cut_count_of(&self, step: Step) -> usize {
        self.ledger
            .iter()
            .filter(|e| e.step == step)
            .map(|e| e.edges.len())
            .sum()
    }

    /// First active vertex whose budget differs from its initial budget plus
    /// the ledger edges incident on it: `(vertex, budget, expected)`.
    pub fn ledger_mismatch(&self, g: &Graph) -> Option<(usize, i64, i64)> {
        let mut expected = self.initial.clone();
        for entry in &self.ledger {
            for e in entry.edges.iter() {
                expected[e.u()] += 1;
                expected[e.v()] += 1;
            }
        }
        g.vertices()
            .find(|&v| expected[v] != self.budgets[v])
            .map(|v| (v, self.budgets[v], expected[v]))
    }
}
