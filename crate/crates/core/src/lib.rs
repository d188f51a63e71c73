//! Abductive answer selection for multiple-choice questions.
//!
//! For every candidate answer the crate retrieves grounding facts (taxonomic,
//! definitional) and abstract facts (core scientific statements), links them
//! into a weighted lexical-overlap graph rooted at `question ‖ choice`, and
//! extracts the best explanation subgraph with an exact 0-1 program. The
//! candidate whose explanation scores highest is the answer. Nine weights
//! control the scoring and are tuned by Bayesian optimization.
//!
//! The modules follow the pipeline:
//!
//! - [`terms`] and [`kb`]: term extraction, overlap, fact and question files
//! - [`retrieval`]: BM25 and unification scoring, top-l/top-m retrieval
//! - [`graph`]: candidate graphs and the weight functions
//! - [`solver`]: constraint emission, branch and bound, brute-force oracle
//! - [`pipeline`]: answer selection end to end
//! - [`metrics`]: accuracy, explanation F1, bucketed reports
//! - [`trainer`]: GP surrogate and expected-improvement search

pub mod ablation;
pub mod error;
pub mod graph;
pub mod kb;
pub mod metrics;
pub mod pipeline;
pub mod retrieval;
pub mod solver;
pub mod terms;
pub mod trainer;

pub use ablation::AblationFlags;
pub use error::{Error, Result};
pub use graph::{build_candidate_graph, edge_weight, node_weight, CandidateGraph, NodeRole, ThetaParams};
pub use kb::{load_kb, load_questions, Fact, FactKind, Question};
pub use pipeline::{answer_question, PipelineConfig, Prediction};
pub use retrieval::{KnowledgeBase, Retriever, ScorerKind};
pub use solver::{brute_force_oracle, emit_constraints, solve, SolveStatus, SubgraphSolution};
pub use terms::{compute_overlap, extract_unique_terms, TermConfig, TermSet};

// The guide's code listings compile and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/terms.md")]
    mod terms {}
    #[doc = include_str!("../../../book/src/retrieval.md")]
    mod retrieval {}
    #[doc = include_str!("../../../book/src/graph.md")]
    mod graph {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/answering.md")]
    mod answering {}
    #[doc = include_str!("../../../book/src/tuning.md")]
    mod tuning {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
