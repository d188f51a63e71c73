//! End-to-end answer selection.
//!
//! Each choice gets its own retrieval, graph and subgraph program; the choice
//! whose optimal subgraph has the largest objective wins. Infeasible choices
//! score `-inf`. Ties, including the all-infeasible case, go to the lowest
//! index.
//!
//! Retrieval and graph structure do not depend on the weights, so a question
//! can be [prepared](prepare_question) once and then
//! [re-answered](answer_prepared) under many parameter settings.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ablation::AblationFlags;
use crate::error::{Error, Result};
use crate::graph::{build_candidate_graph, CandidateGraph, ThetaParams};
use crate::kb::{FactKind, Question};
use crate::retrieval::Retriever;
use crate::solver::{emit_constraints, solve, SubgraphSolution, DEFAULT_ABSTRACT_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Grounding facts retrieved per candidate.
    pub l: usize,
    /// Abstract facts retrieved per candidate.
    pub m: usize,
    /// Cap on selected abstract facts.
    pub abstract_limit: usize,
    pub ablation: AblationFlags,
}

impl PipelineConfig {
    /// Splits `k` evenly between the two knowledge bases.
    pub fn with_k(k: usize) -> Result<Self> {
        if k == 0 || !k.is_multiple_of(2) {
            return Err(Error::Config(format!("k must be a positive even number, got {k}")));
        }
        Ok(PipelineConfig {
            l: k / 2,
            m: k / 2,
            abstract_limit: DEFAULT_ABSTRACT_LIMIT,
            ablation: AblationFlags::none(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.abstract_limit == 0 {
            return Err(Error::Config("abstract limit K must be at least 1".into()));
        }
        Ok(())
    }

    /// The parameters actually used: `theta`, or the sign pattern under
    /// `no_tuning`.
    pub fn effective_theta(&self, theta: ThetaParams) -> ThetaParams {
        if self.ablation.no_tuning {
            ThetaParams::SIGN_PATTERN
        } else {
            theta
        }
    }
}

/// One question with its per-choice graphs built (weights not yet final).
#[derive(Debug, Clone)]
pub struct PreparedQuestion {
    pub question_id: String,
    pub gold_answer: Option<usize>,
    pub candidates: Vec<CandidateGraph>,
}

pub fn prepare_question(question: &Question, retriever: &Retriever, cfg: &PipelineConfig) -> Result<PreparedQuestion> {
    question.validate()?;
    cfg.validate()?;
    let candidates = (0..question.choices.len())
        .map(|choice| {
            let r = retriever.retrieve(question, choice, cfg.l, cfg.m);
            build_candidate_graph(
                question,
                choice,
                &r.grounding,
                &r.abstract_facts,
                ThetaParams::SIGN_PATTERN,
                &retriever.terms,
                cfg.ablation,
            )
        })
        .collect();
    Ok(PreparedQuestion {
        question_id: question.id.clone(),
        gold_answer: question.gold_answer,
        candidates,
    })
}

/// A choice's graph and its optimal subgraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateDump {
    pub choice: usize,
    pub graph: CandidateGraph,
    pub solution: SubgraphSolution,
}

fn ser_omega<S: Serializer>(values: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Option<f64>> = values.iter().map(|x| x.is_finite().then_some(*x)).collect();
    v.serialize(s)
}

fn de_omega<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    let v: Vec<Option<f64>> = Vec::deserialize(d)?;
    Ok(v.into_iter().map(|x| x.unwrap_or(f64::NEG_INFINITY)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub question_id: String,
    pub chosen_index: usize,
    /// Optimal objective per choice; `-inf` (`null` on disk) when infeasible.
    #[serde(serialize_with = "ser_omega", deserialize_with = "de_omega")]
    pub per_choice_omega: Vec<f64>,
    /// Abstract facts selected in the winning subgraph, sorted.
    pub explanation: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgraphs: Option<Vec<CandidateDump>>,
}

/// Index of the largest score; first index on ties and when all are `-inf`.
pub fn select_answer(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

/// Solves every candidate of a prepared question under `theta`.
pub fn solve_candidates(prepared: &PreparedQuestion, theta: ThetaParams, cfg: &PipelineConfig) -> Vec<(CandidateGraph, SubgraphSolution)> {
    let theta = cfg.effective_theta(theta);
    prepared
        .candidates
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.reweight(theta);
            let model = emit_constraints(&g, cfg.abstract_limit, &cfg.ablation);
            let solution = solve(&model);
            (g, solution)
        })
        .collect()
}

pub fn answer_prepared(prepared: &PreparedQuestion, theta: ThetaParams, cfg: &PipelineConfig, keep_subgraphs: bool) -> Prediction {
    let solved = solve_candidates(prepared, theta, cfg);
    let per_choice_omega: Vec<f64> = solved.iter().map(|(_, s)| s.score()).collect();
    let chosen_index = select_answer(&per_choice_omega);
    let (graph, solution) = &solved[chosen_index];
    let mut explanation: Vec<String> = solution
        .selected_vertices
        .iter()
        .filter_map(|&v| {
            let node = &graph.nodes[v];
            match node.fact_kind {
                Some(FactKind::Abstract) => node.fact_id.clone(),
                _ => None,
            }
        })
        .collect();
    explanation.sort();
    let subgraphs = keep_subgraphs.then(|| {
        solved
            .into_iter()
            .enumerate()
            .map(|(choice, (graph, solution))| CandidateDump {
                choice,
                graph,
                solution,
            })
            .collect()
    });
    Prediction {
        question_id: prepared.question_id.clone(),
        chosen_index,
        per_choice_omega,
        explanation,
        subgraphs,
    }
}

pub fn answer_question(question: &Question, retriever: &Retriever, theta: ThetaParams, cfg: &PipelineConfig) -> Result<Prediction> {
    let prepared = prepare_question(question, retriever, cfg)?;
    Ok(answer_prepared(&prepared, theta, cfg, false))
}

pub fn prepare_all(questions: &[Question], retriever: &Retriever, cfg: &PipelineConfig) -> Result<Vec<PreparedQuestion>> {
    questions
        .par_iter()
        .map(|q| prepare_question(q, retriever, cfg))
        .collect()
}

/// Answers all questions in parallel. Output follows input order.
pub fn answer_all(prepared: &[PreparedQuestion], theta: ThetaParams, cfg: &PipelineConfig, keep_subgraphs: bool) -> Vec<Prediction> {
    prepared
        .par_iter()
        .map(|p| answer_prepared(p, theta, cfg, keep_subgraphs))
        .collect()
}

/// Writes predictions as JSONL sorted by question id.
pub fn write_predictions<W: Write>(predictions: &[Prediction], mut out: W) -> Result<()> {
    let mut sorted: Vec<&Prediction> = predictions.iter().collect();
    sorted.sort_by(|a, b| a.question_id.cmp(&b.question_id));
    for p in sorted {
        serde_json::to_writer(&mut out, p)?;
        out.write_all(b"\n").map_err(|e| Error::io("<predictions>", e))?;
    }
    Ok(())
}

pub fn read_predictions<R: BufRead>(input: R) -> Result<Vec<Prediction>> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<predictions>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: "<predictions>".into(),
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}
