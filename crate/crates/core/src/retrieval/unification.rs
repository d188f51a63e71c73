//! Explanatory-reuse scoring for abstract facts.
//!
//! This is a simplified unification scorer: a fact scores well when it appears
//! in the gold explanations of training questions similar to the query. The
//! final score mixes that reuse signal with the fact's own BM25 score:
//!
//! `lambda * bm25(query, fact) + (1 - lambda) * Σ sim(q, q_t) · [fact ∈ gold(q_t)] / Σ sim(q, q_t)`
//!
//! where the sums range over the `top_j` training questions most similar to
//! the query, similarity being BM25 over training-question stems.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::kb::Question;
use crate::retrieval::bm25::Bm25Index;
use crate::terms::{normalized_tokens, TermConfig, TermSet};

pub const DEFAULT_LAMBDA_MIX: f64 = 0.5;
pub const DEFAULT_TOP_J: usize = 10;

#[derive(Debug, Clone)]
struct TrainingExplanation {
    id: String,
    gold: BTreeSet<String>,
}

#[derive(Debug, Clone)]
pub struct UnificationModel {
    train: Vec<TrainingExplanation>,
    stems: Option<Bm25Index>,
    pub lambda_mix: f64,
    pub top_j: usize,
}

/// Training questions most similar to one query, with their similarities.
#[derive(Debug, Clone, Default)]
pub struct SimilarQuestions {
    hits: Vec<(usize, f64)>,
}

impl SimilarQuestions {
    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}

impl UnificationModel {
    /// Builds the model from training questions carrying gold explanations.
    /// Questions without one are ignored. Gold ids must name abstract facts.
    pub fn new(
        train: &[Question],
        abstract_ids: &HashSet<&str>,
        cfg: &TermConfig,
        lambda_mix: f64,
        top_j: usize,
        k1: f64,
        b: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda_mix) {
            return Err(Error::Config(format!("lambda_mix {lambda_mix} outside [0, 1]")));
        }
        let mut kept = Vec::new();
        let mut docs = Vec::new();
        for q in train {
            let Some(gold) = &q.gold_explanation else { continue };
            q.validate_explanation(abstract_ids)?;
            kept.push(TrainingExplanation {
                id: q.id.clone(),
                gold: gold.clone(),
            });
            docs.push((q.id.clone(), normalized_tokens(&q.stem, cfg)));
        }
        let stems = if kept.is_empty() {
            log::warn!("unification model has no training explanations; falling back to BM25");
            None
        } else {
            Some(Bm25Index::from_documents(
                docs.iter().map(|(id, toks)| (id.as_str(), toks.as_slice())),
                k1,
                b,
            )?)
        };
        Ok(UnificationModel {
            train: kept,
            stems,
            lambda_mix,
            top_j,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_none()
    }

    /// Top-`top_j` training questions by stem similarity (ties by id), skipping
    /// `exclude` so a training question never votes for itself.
    pub fn similar(&self, query: &TermSet, exclude: Option<&str>) -> SimilarQuestions {
        let Some(stems) = &self.stems else {
            return SimilarQuestions::default();
        };
        let scores = stems.score_all(query);
        let mut hits: Vec<(usize, f64)> = self
            .train
            .iter()
            .enumerate()
            .filter(|(_, t)| Some(t.id.as_str()) != exclude)
            .map(|(i, t)| (i, scores[t.id.as_str()]))
            .filter(|(_, s)| *s > 0.0)
            .collect();
        hits.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| self.train[a.0].id.cmp(&self.train[b.0].id))
        });
        hits.truncate(self.top_j);
        SimilarQuestions { hits }
    }

    /// Similarity-weighted share of similar questions whose gold explanation
    /// contains `fact_id`. In `[0, 1]`; 0 when there are no similar questions.
    pub fn reuse_score(&self, similar: &SimilarQuestions, fact_id: &str) -> f64 {
        let total: f64 = similar.hits.iter().map(|(_, s)| s).sum();
        if total <= 0.0 {
            return 0.0;
        }
        let hit: f64 = similar
            .hits
            .iter()
            .filter(|(i, _)| self.train[*i].gold.contains(fact_id))
            .map(|(_, s)| s)
            .sum();
        hit / total
    }

    /// Combines a precomputed BM25 score with the reuse score.
    pub fn mix(&self, bm25: f64, similar: &SimilarQuestions, fact_id: &str) -> f64 {
        if self.is_empty() {
            return bm25;
        }
        self.lambda_mix * bm25 + (1.0 - self.lambda_mix) * self.reuse_score(similar, fact_id)
    }
}

pub fn score_unification(
    model: &UnificationModel,
    abstract_index: &Bm25Index,
    query: &TermSet,
    fact_id: &str,
    exclude: Option<&str>,
) -> Result<f64> {
    let bm25 = abstract_index.score(query, fact_id)?;
    let similar = model.similar(query, exclude);
    Ok(model.mix(bm25, &similar, fact_id))
}
