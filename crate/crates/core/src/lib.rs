//! Balanced cuts on planted graphs with permutation-invariant noise.
//!
//! * [`graph`]: simple graphs over stable ids, cuts and edge sets.
//! * [`pie`]: planted instance generation and structural validators.
//! * [`sdp`]: the balanced-cut vector relaxation, a low-rank solver for it,
//!   feasibility checks and ball-growing rounding.
//! * [`maxflow`]: exact min-cut for damage control.
//! * [`algorithm`]: budgets, the iterative cutting loop and its fallbacks.
//! * [`harness`]: scoring against ground truth, baselines, audits and
//!   benchmarks.

pub mod algorithm;
pub mod config;
pub mod error;
pub mod graph;
pub mod harness;
pub mod maxflow;
pub mod pie;
pub mod rng;
pub mod sdp;

pub use error::{Error, Result};
pub use graph::{Cut, Edge, EdgeSet, Graph};
