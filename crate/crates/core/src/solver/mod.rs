//! Rooted maximum-weight subgraph extraction as an exact 0-1 program.

mod bnb;
pub mod model;
mod oracle;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use bnb::solve;
pub use model::{
    emit_constraints, ActiveFamilies, ConstraintFamily, IlpModel, LinearConstraint, Sense, Var,
    DEFAULT_ABSTRACT_LIMIT,
};
pub use oracle::{brute_force_oracle, ORACLE_VERTEX_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphSolution {
    pub status: SolveStatus,
    pub selected_vertices: BTreeSet<usize>,
    /// Selected edges as `(u, v)` with `u < v`, sorted.
    pub selected_edges: Vec<(usize, usize)>,
    pub objective_value: Option<f64>,
}

impl SubgraphSolution {
    pub fn infeasible() -> Self {
        SubgraphSolution {
            status: SolveStatus::Infeasible,
            selected_vertices: BTreeSet::new(),
            selected_edges: Vec::new(),
            objective_value: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Objective for ranking: `-inf` when infeasible.
    pub fn score(&self) -> f64 {
        self.objective_value.unwrap_or(f64::NEG_INFINITY)
    }
}
