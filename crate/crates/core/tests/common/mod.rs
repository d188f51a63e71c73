#![allow(dead_code)]

use std::collections::BTreeSet;

use groundchain::graph::FactNodeSpec;
use groundchain::retrieval::{KnowledgeBase, Retriever, DEFAULT_B, DEFAULT_K1};
use groundchain::{AblationFlags, CandidateGraph, Fact, FactKind, NodeRole, Question, SubgraphSolution, TermConfig, ThetaParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_theta(rng: &mut impl Rng) -> ThetaParams {
    let u: Vec<f64> = (0..9).map(|_| rng.random::<f64>()).collect();
    ThetaParams::from_unit(&u)
}

/// Random candidate graph with `1..=max_vertices` vertices.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, ablation: AblationFlags) -> CandidateGraph {
    let n = rng.random_range(1..=max_vertices);
    let specs: Vec<FactNodeSpec> = (1..n)
        .map(|i| FactNodeSpec {
            fact_id: Some(format!("f{i}")),
            kind: if rng.random_bool(0.5) { FactKind::Grounding } else { FactKind::Abstract },
            relevance: rng.random::<f64>(),
        })
        .collect();
    let density = rng.random_range(0.2..0.8);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(density) {
                // overlap in (0, 1]
                pairs.push((u, v, 1.0 - rng.random::<f64>()));
            }
        }
    }
    CandidateGraph::from_parts(&specs, &pairs, random_theta(rng), ablation).unwrap()
}

/// Checks an optimal solution against every constraint, written directly from
/// the definitions. Returns the list of violations.
pub fn constraint_violations(graph: &CandidateGraph, k: usize, sol: &SubgraphSolution) -> Vec<String> {
    let mut out = Vec::new();
    let sel = &sol.selected_vertices;
    let edges: BTreeSet<(usize, usize)> = sol.selected_edges.iter().copied().collect();
    if !sel.contains(&0) {
        out.push("root not selected".to_string());
    }
    for e in &graph.edges {
        let both = sel.contains(&e.u) && sel.contains(&e.v);
        if both != edges.contains(&(e.u, e.v)) {
            out.push(format!("edge ({}, {}) coupling broken", e.u, e.v));
        }
    }
    for &(u, v) in &edges {
        if !graph.edges.iter().any(|e| (e.u, e.v) == (u, v)) {
            out.push(format!("selected non-edge ({u}, {v})"));
        }
    }
    let abstract_count = sel.iter().filter(|&&v| graph.nodes[v].role == NodeRole::Abstract).count();
    if abstract_count > k {
        out.push(format!("{abstract_count} abstract facts > K={k}"));
    }
    let adj = graph.neighbors();
    for &v in sel {
        if !adj[v].iter().any(|u| sel.contains(u)) {
            out.push(format!("vertex {v} has no selected neighbor"));
        }
        if graph.nodes[v].role == NodeRole::Grounding {
            let support = adj[v]
                .iter()
                .filter(|u| sel.contains(u) && matches!(graph.nodes[**u].role, NodeRole::Abstract | NodeRole::Question))
                .count();
            if support < 2 {
                out.push(format!("grounding {v} has {support} abstract/root neighbors"));
            }
        }
    }
    out
}

/// `vw·Σ node weights + ew·Σ edge weights` over the selected sets.
pub fn recompute_objective(graph: &CandidateGraph, sol: &SubgraphSolution) -> f64 {
    let nodes: f64 = sol.selected_vertices.iter().map(|&v| graph.nodes[v].weight).sum();
    let edges: f64 = graph
        .edges
        .iter()
        .filter(|e| sol.selected_edges.contains(&(e.u, e.v)))
        .map(|e| e.weight)
        .sum();
    graph.theta.vw * nodes + graph.theta.ew * edges
}

/// Stopwords for the synthetic corpus.
pub fn synthetic_terms() -> TermConfig {
    TermConfig::bare().with_stopwords(["the", "is", "a", "in", "causes", "of", "and", "are", "which", "choice", "fits"])
}

/// Ten questions over thirty facts. For question `i` the gold choice links
/// to grounding fact `G0i`, which links to abstract fact `A0i`; wrong choices
/// only reach decoy groundings `D0i` whose concepts have no abstract fact.
pub fn synthetic_corpus() -> (Vec<Fact>, Vec<Fact>, Vec<Question>) {
    let cfg = synthetic_terms();
    let mut grounding = Vec::new();
    let mut abstract_facts = Vec::new();
    let mut questions = Vec::new();
    for i in 0..10 {
        grounding.push(Fact::new(format!("G{i:02}"), format!("gold{i} is a concept{i}"), FactKind::Grounding, &cfg));
        grounding.push(Fact::new(
            format!("D{i:02}"),
            format!("wrong{i}x and wrong{i}y are orphan{i}"),
            FactKind::Grounding,
            &cfg,
        ));
        abstract_facts.push(Fact::new(
            format!("A{i:02}"),
            format!("the concept{i} causes effect{i} in gold{i}"),
            FactKind::Abstract,
            &cfg,
        ));
        let gold = i % 3;
        let mut choices = vec![format!("wrong{i}x"), format!("wrong{i}y")];
        choices.insert(gold, format!("gold{i}"));
        questions.push(Question {
            id: format!("q{i:02}"),
            stem: format!("which choice fits puzzle{i}"),
            choices,
            gold_answer: Some(gold),
            gold_explanation: Some([format!("A{i:02}")].into_iter().collect()),
        });
    }
    (grounding, abstract_facts, questions)
}

pub fn retriever_for(grounding: Vec<Fact>, abstract_facts: Vec<Fact>, cfg: TermConfig) -> Retriever {
    Retriever::new(
        KnowledgeBase::new(grounding, DEFAULT_K1, DEFAULT_B).unwrap(),
        KnowledgeBase::new(abstract_facts, DEFAULT_K1, DEFAULT_B).unwrap(),
        cfg,
    )
}

/// A random corpus over a small vocabulary, so graphs are dense and answers
/// are not trivial.
pub fn random_corpus(rng: &mut impl Rng, n_questions: usize) -> (Retriever, Vec<Question>) {
    let cfg = TermConfig::bare();
    let vocab: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
    let words = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| -> String {
        let n = rng.random_range(lo..=hi);
        (0..n).map(|_| vocab[rng.random_range(0..vocab.len())].clone()).collect::<Vec<_>>().join(" ")
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.random());
    let grounding: Vec<Fact> = (0..30)
        .map(|i| Fact::new(format!("g{i:02}"), words(&mut local, 2, 4), FactKind::Grounding, &cfg))
        .collect();
    let abstract_facts: Vec<Fact> = (0..30)
        .map(|i| Fact::new(format!("a{i:02}"), words(&mut local, 3, 6), FactKind::Abstract, &cfg))
        .collect();
    let questions = (0..n_questions)
        .map(|i| Question {
            id: format!("r{i:03}"),
            stem: words(&mut local, 2, 4),
            choices: (0..4).map(|_| words(&mut local, 1, 2)).collect(),
            gold_answer: Some(local.random_range(0..4)),
            gold_explanation: None,
        })
        .collect();
    (retriever_for(grounding, abstract_facts, cfg), questions)
}
