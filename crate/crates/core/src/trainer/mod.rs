//! Tuning the nine weights against answer accuracy.

pub mod bo;
pub mod gp;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ThetaParams;
use crate::pipeline::{answer_prepared, PipelineConfig, PreparedQuestion};

pub use bo::{latin_hypercube, optimize, propose_next, random_search, Acquisition, BoConfig, BoTrace, Evaluation};
pub use gp::{expected_improvement, gp_fit_predict, GaussianProcess, Kernel};

/// Fraction of prepared questions answered correctly under `theta`.
pub fn evaluate_theta(theta: &ThetaParams, questions: &[PreparedQuestion], cfg: &PipelineConfig) -> Result<f64> {
    if questions.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let correct: Result<Vec<bool>> = questions
        .par_iter()
        .map(|q| {
            let gold = q.gold_answer.ok_or_else(|| Error::MissingGold(q.question_id.clone()))?;
            Ok(answer_prepared(q, *theta, cfg, false).chosen_index == gold)
        })
        .collect();
    let correct = correct?.into_iter().filter(|c| *c).count();
    Ok(correct as f64 / questions.len() as f64)
}

/// Bayesian optimization of accuracy over the training questions.
pub fn train(questions: &[PreparedQuestion], cfg: &PipelineConfig, bo: &BoConfig) -> Result<BoTrace> {
    if questions.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    optimize(|theta| evaluate_theta(theta, questions, cfg), bo)
}
