//! Named invariant checks recorded during a run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub checked: usize,
    pub failed: usize,
    /// Context of the first failure.
    pub first_failure: Option<String>,
    /// Soft checks are diagnostics and never fail a run.
    pub soft: bool,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Per-invariant pass/fail counts with the first counterexample of each.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InvariantLog {
    pub checks: BTreeMap<String, CheckSummary>,
}

impl InvariantLog {
    pub fn record(&mut self, name: &str, ok: bool, context: impl FnOnce() -> String) {
        self.record_kind(name, ok, false, context);
    }

    pub fn record_soft(&mut self, name: &str, ok: bool, context: impl FnOnce() -> String) {
        self.record_kind(name, ok, true, context);
    }

    fn record_kind(&mut self, name: &str, ok: bool, soft: bool, context: impl FnOnce() -> String) {
        let entry = self.checks.entry(name.to_string()).or_default();
        entry.soft = soft;
        entry.checked += 1;
        if !ok {
            entry.failed += 1;
            if entry.first_failure.is_none() {
                entry.first_failure = Some(context());
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.get(name)
    }

    /// True iff no hard check failed.
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.soft || c.passed())
    }

    /// First failing hard check and its context.
    pub fn first_hard_failure(&self) -> Option<(&str, &str)> {
        self.checks
            .iter()
            .find(|(_, c)| !c.soft && !c.passed())
            .map(|(n, c)| (n.as_str(), c.first_failure.as_deref().unwrap_or("")))
    }

    pub fn merge(&mut self, other: &InvariantLog) {
        for (name, c) in &other.checks {
            let entry = self.checks.entry(name.clone()).or_default();
            entry.soft = c.soft;
            entry.checked += c.checked;
            entry.failed += c.failed;
            if entry.first_failure.is_none() {
                entry.first_failure.clone_from(&c.first_failure);
            }
        }
    }
}

/// Check names, shared by the pipeline and the audit report.
pub mod names {
    pub const LEDGER_IDENTITY: &str = "ledger-identity";
    pub const BUDGET_MONOTONE: &str = "budget-decreases-by-cut";
    pub const EXTRA_NONNEGATIVE: &str = "extra-budget-nonnegative";
    pub const LONG_EDGE_TOTAL: &str = "long-edge-total";
    pub const COMPONENT_SIZE: &str = "component-size";
    pub const DAMAGE_POSTCONDITION: &str = "damage-control-postcondition";
    pub const TOTAL_CUT: &str = "total-cut-bound";
    pub const PIECE_SIZE: &str = "piece-size";
    pub const SIDE_SIZE: &str = "final-side-size";
    pub const EDGE_CONSERVATION: &str = "edge-conservation";
    pub const SDP_FEASIBLE: &str = "sdp-feasible";
    pub const SDP_MONOTONE: &str = "sdp-cost-nonincreasing";
}
