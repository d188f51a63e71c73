//! Per-candidate fact retrieval.
//!
//! For a question and one of its choices, the concatenated text is reduced to
//! terms and used to rank both knowledge bases. Grounding facts are always
//! ranked by BM25; abstract facts by BM25 or by the unification scorer.
//! Relevance is the raw score divided by the largest raw score in the returned
//! list, so the top hit has relevance 1 whenever anything matched.

pub mod bm25;
pub mod unification;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{Fact, FactKind, Question};
use crate::terms::{extract_unique_terms, TermConfig, TermSet};

pub use bm25::{build_index, score_bm25, Bm25Index, DEFAULT_B, DEFAULT_K1};
pub use unification::{score_unification, UnificationModel, DEFAULT_LAMBDA_MIX, DEFAULT_TOP_J};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScorerKind {
    #[default]
    Bm25,
    Unification,
}

/// Facts of one kind with their index.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub kind: FactKind,
    pub facts: Vec<Fact>,
    pub index: Bm25Index,
    by_id: HashMap<String, usize>,
}

impl KnowledgeBase {
    pub fn new(facts: Vec<Fact>, k1: f64, b: f64) -> Result<Self> {
        let index = build_index(&facts, k1, b)?;
        Self::with_index(facts, index)
    }

    /// Pairs facts with a prebuilt index. The index must cover exactly the
    /// same fact ids.
    pub fn with_index(facts: Vec<Fact>, index: Bm25Index) -> Result<Self> {
        let kind = match facts.first() {
            Some(f) => f.kind,
            None => return Err(Error::EmptyCorpus),
        };
        let mut by_id = HashMap::with_capacity(facts.len());
        for (i, f) in facts.iter().enumerate() {
            if f.kind != kind {
                return Err(Error::Config(format!("fact `{}` has mixed kind", f.id)));
            }
            if by_id.insert(f.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(f.id.clone()));
            }
            if !index.contains(&f.id) {
                return Err(Error::UnknownFact(f.id.clone()));
            }
        }
        if index.doc_count != facts.len() {
            return Err(Error::Config(format!(
                "index covers {} documents but the KB has {} facts",
                index.doc_count,
                facts.len()
            )));
        }
        Ok(KnowledgeBase {
            kind,
            facts,
            index,
            by_id,
        })
    }

    pub fn get(&self, id: &str) -> Option<&Fact> {
        self.by_id.get(id).map(|&i| &self.facts[i])
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RetrievedFact<'a> {
    pub fact: &'a Fact,
    pub relevance: f64,
}

#[derive(Debug, Clone)]
pub struct Retrieval<'a> {
    pub query: TermSet,
    pub grounding: Vec<RetrievedFact<'a>>,
    pub abstract_facts: Vec<RetrievedFact<'a>>,
}

/// Keeps the `n` best `(fact index, raw score)` pairs (score descending, id
/// ascending) and max-normalizes their scores.
fn top_normalized<'a>(kb: &'a KnowledgeBase, mut scored: Vec<(usize, f64)>, n: usize) -> Vec<RetrievedFact<'a>> {
    scored.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| kb.facts[a.0].id.cmp(&kb.facts[b.0].id))
    });
    scored.truncate(n);
    let max = scored.iter().map(|(_, s)| *s).fold(0.0f64, f64::max);
    scored
        .into_iter()
        .map(|(i, s)| RetrievedFact {
            fact: &kb.facts[i],
            relevance: if max > 0.0 { s / max } else { 0.0 },
        })
        .collect()
}

fn bm25_scores(kb: &KnowledgeBase, query: &TermSet) -> Vec<(usize, f64)> {
    let by_doc = kb.index.score_all(query);
    kb.facts
        .iter()
        .enumerate()
        .map(|(i, f)| (i, by_doc[f.id.as_str()]))
        .collect()
}

/// Both knowledge bases plus the abstract-fact scorer.
#[derive(Debug, Clone)]
pub struct Retriever {
    pub grounding: KnowledgeBase,
    pub abstract_kb: KnowledgeBase,
    pub terms: TermConfig,
    pub scorer: ScorerKind,
    pub unification: Option<UnificationModel>,
}

impl Retriever {
    pub fn new(grounding: KnowledgeBase, abstract_kb: KnowledgeBase, terms: TermConfig) -> Self {
        Retriever {
            grounding,
            abstract_kb,
            terms,
            scorer: ScorerKind::Bm25,
            unification: None,
        }
    }

    pub fn with_unification(mut self, model: UnificationModel) -> Self {
        self.scorer = ScorerKind::Unification;
        self.unification = Some(model);
        self
    }

    /// Top-`l` grounding and top-`m` abstract facts for `question ‖ choice`.
    pub fn retrieve(&self, question: &Question, choice: usize, l: usize, m: usize) -> Retrieval<'_> {
        let query = extract_unique_terms(&question.hypothesis(choice), &self.terms);
        let grounding = top_normalized(&self.grounding, bm25_scores(&self.grounding, &query), l);
        let mut abstract_scores = bm25_scores(&self.abstract_kb, &query);
        if let (ScorerKind::Unification, Some(model)) = (self.scorer, &self.unification) {
            let similar = model.similar(&query, Some(question.id.as_str()));
            for (i, s) in abstract_scores.iter_mut() {
                *s = model.mix(*s, &similar, &self.abstract_kb.facts[*i].id);
            }
        }
        let abstract_facts = top_normalized(&self.abstract_kb, abstract_scores, m);
        Retrieval {
            query,
            grounding,
            abstract_facts,
        }
    }
}
