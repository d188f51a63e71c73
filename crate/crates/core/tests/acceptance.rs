//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::Instant;

use groundchain::graph::FactNodeSpec;
use groundchain::metrics::{accuracy, bucketed_report, explanation_f1, write_report_csv, Averaging, BucketFeature};
use groundchain::pipeline::{answer_all, answer_prepared, prepare_all, write_predictions};
use groundchain::retrieval::{Bm25Index, KnowledgeBase, DEFAULT_B, DEFAULT_K1};
use groundchain::solver::{ConstraintFamily, ORACLE_VERTEX_LIMIT};
use groundchain::trainer::{optimize, random_search, BoConfig, GaussianProcess, Kernel};
use groundchain::{
    brute_force_oracle, compute_overlap, edge_weight, emit_constraints, load_kb, load_questions, node_weight, solve,
    AblationFlags, CandidateGraph, FactKind, NodeRole, PipelineConfig, TermSet, ThetaParams,
};
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reference_theta() -> ThetaParams {
    ThetaParams {
        vw: 0.76,
        ew: 0.80,
        gr: 0.36,
        ar: 0.03,
        aa: 0.01,
        ga: 0.14,
        qg: 0.98,
        qa: 0.10,
        gg: -0.99,
    }
}

fn solver_oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = common::rng(1);
    let mut feasible = 0;
    for case in 0..600 {
        let graph = common::random_graph(&mut rng, 12, AblationFlags::none());
        let k = rng.random_range(1..=3);
        let fast = solve(&emit_constraints(&graph, k, &AblationFlags::none()));
        let slow = brute_force_oracle(&graph, k, &AblationFlags::none()).map_err(|e| e.to_string())?;
        ensure(fast.status == slow.status, || format!("case {case}: status {:?} vs oracle {:?}", fast.status, slow.status))?;
        if fast.is_optimal() {
            feasible += 1;
            let (a, b) = (fast.objective_value.unwrap(), slow.objective_value.unwrap());
            ensure((a - b).abs() <= 1e-9, || format!("case {case}: omega {a} vs oracle {b}"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("600 graphs, {feasible} feasible, {secs:.2}s"))
}

fn constraint_satisfaction() -> Check {
    let mut rng = common::rng(2);
    let mut checked = 0;
    for case in 0..600 {
        let graph = common::random_graph(&mut rng, 12, AblationFlags::none());
        let k = rng.random_range(1..=3);
        let sol = solve(&emit_constraints(&graph, k, &AblationFlags::none()));
        if sol.is_optimal() {
            checked += 1;
            let v = common::constraint_violations(&graph, k, &sol);
            ensure(v.is_empty(), || format!("case {case}: {v:?}"))?;
        }
    }
    Ok(format!("{checked} optimal solutions, 0 violations"))
}

fn overlap_properties() -> Check {
    let mut rng = common::rng(3);
    let vocab: Vec<String> = (0..12).map(|i| format!("t{i}")).collect();
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> TermSet {
        let p = rng.random::<f64>();
        vocab.iter().filter(|_| rng.random_bool(p)).cloned().collect()
    };
    for case in 0..1000 {
        let a = sample(&mut rng);
        let b = sample(&mut rng);
        let ab = compute_overlap(&a, &b);
        ensure(ab == compute_overlap(&b, &a), || format!("case {case}: asymmetric"))?;
        ensure((0.0..=1.0).contains(&ab), || format!("case {case}: {ab} out of range"))?;
        if a.is_empty() && b.is_empty() {
            ensure(ab == 0.0, || format!("case {case}: empty pair gave {ab}"))?;
        }
        if !a.is_empty() {
            ensure(compute_overlap(&a, &a) == 1.0, || format!("case {case}: O(a,a) != 1"))?;
        }
    }
    ensure(compute_overlap(&TermSet::new(), &TermSet::new()) == 0.0, || "empty pair".into())?;
    Ok("1000 pairs".into())
}

/// Q, G1, G2, A1, A2 with hand-picked relevances and overlaps.
fn five_node_fixture(theta: ThetaParams, ablation: AblationFlags) -> CandidateGraph {
    let spec = |id: &str, kind, relevance| FactNodeSpec { fact_id: Some(id.into()), kind, relevance };
    let facts = [
        spec("G1", FactKind::Grounding, 0.5),
        spec("G2", FactKind::Grounding, 0.25),
        spec("A1", FactKind::Abstract, 1.0),
        spec("A2", FactKind::Abstract, 0.4),
    ];
    let pairs = [
        (0, 1, 0.2),  // Q-G1
        (0, 3, 0.5),  // Q-A1
        (1, 2, 0.5),  // G1-G2
        (1, 3, 0.1),  // G1-A1
        (3, 4, 0.75), // A1-A2
        (2, 4, 1.0),  // G2-A2
    ];
    CandidateGraph::from_parts(&facts, &pairs, theta, ablation).unwrap()
}

fn weight_conformance() -> Check {
    let g = five_node_fixture(reference_theta(), AblationFlags::none());
    // 0.36·0.5, 0.36·0.25, 0.03·1.0, 0.03·0.4
    let nodes = [0.0, 0.18, 0.09, 0.03, 0.012];
    for (v, want) in nodes.iter().enumerate() {
        let got = g.nodes[v].weight;
        ensure((got - want).abs() <= 1e-12, || format!("node {v}: {got} vs {want}"))?;
    }
    // qg·⌈0.2⌉, qa·0.5, gg·0.5, ga·⌈0.1⌉, ga·⌈1.0⌉, aa·0.75
    let edges = [((0, 1), 0.98), ((0, 3), 0.05), ((1, 2), -0.495), ((1, 3), 0.14), ((2, 4), 0.14), ((3, 4), 0.0075)];
    for ((u, v), want) in edges {
        let e = g.edges.iter().find(|e| (e.u, e.v) == (u, v)).ok_or(format!("edge ({u},{v}) missing"))?;
        ensure((e.weight - want).abs() <= 1e-12, || format!("edge ({u},{v}): {} vs {want}", e.weight))?;
    }
    let t = reference_theta();
    for o in [1e-9, 0.01, 0.3, 1.0] {
        ensure(edge_weight(NodeRole::Question, NodeRole::Grounding, o, &t) == 0.98, || format!("qg ceiling at {o}"))?;
        ensure(edge_weight(NodeRole::Abstract, NodeRole::Grounding, o, &t) == 0.14, || format!("ga ceiling at {o}"))?;
    }
    ensure(node_weight(NodeRole::Question, 1.0, &t) == 0.0, || "question node weight".into())?;
    Ok("5 nodes, 6 edges".into())
}

fn argmax_scaling() -> Check {
    let mut rng = common::rng(5);
    let (retriever, questions) = common::random_corpus(&mut rng, 100);
    let cfg = PipelineConfig::with_k(10).unwrap();
    let prepared = prepare_all(&questions, &retriever, &cfg).map_err(|e| e.to_string())?;
    let theta = common::random_theta(&mut rng);
    let base = answer_all(&prepared, theta, &cfg, false);
    let mut feasible_answers = 0;
    for c in [0.1, 2.0, 10.0] {
        let scaled = answer_all(&prepared, theta.scaled(c), &cfg, false);
        for (a, b) in base.iter().zip(&scaled) {
            ensure(a.chosen_index == b.chosen_index, || {
                format!("{} with c={c}: {} vs {}", a.question_id, a.chosen_index, b.chosen_index)
            })?;
        }
    }
    for p in &base {
        if p.per_choice_omega.iter().any(|w| w.is_finite()) {
            feasible_answers += 1;
        }
    }
    Ok(format!("100 questions x 3 scales, {feasible_answers} with a feasible choice"))
}

fn synthetic_end_to_end() -> Check {
    let start = Instant::now();
    let (grounding, abstract_facts, questions) = common::synthetic_corpus();
    ensure(grounding.len() + abstract_facts.len() == 30, || "fixture size".into())?;
    let retriever = common::retriever_for(grounding, abstract_facts, common::synthetic_terms());
    let mut cfg = PipelineConfig::with_k(10).unwrap();
    cfg.ablation.no_tuning = true;
    let prepared = prepare_all(&questions, &retriever, &cfg).map_err(|e| e.to_string())?;
    let preds = answer_all(&prepared, ThetaParams::SIGN_PATTERN, &cfg, true);
    let acc = accuracy(&preds, &questions).map_err(|e| e.to_string())?;
    let (f1, n) = explanation_f1(&preds, &questions, Averaging::Macro).map_err(|e| e.to_string())?;
    ensure(acc == 1.0, || format!("accuracy {acc}"))?;
    ensure(f1.f1 == 1.0 && n == 10, || format!("macro F1 {} over {n}", f1.f1))?;
    for p in &preds {
        let dump = &p.subgraphs.as_ref().unwrap()[p.chosen_index];
        ensure(dump.graph.vertex_count() <= ORACLE_VERTEX_LIMIT, || "graph too large for oracle".into())?;
        let oracle = brute_force_oracle(&dump.graph, cfg.abstract_limit, &cfg.ablation).map_err(|e| e.to_string())?;
        ensure(oracle.selected_vertices == dump.solution.selected_vertices, || {
            format!("{}: {:?} vs oracle {:?}", p.question_id, dump.solution.selected_vertices, oracle.selected_vertices)
        })?;
        let wrong_feasible = p.per_choice_omega.iter().enumerate().any(|(i, w)| i != p.chosen_index && w.is_finite());
        ensure(!wrong_feasible, || format!("{}: a wrong choice is feasible", p.question_id))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.1}s"))?;
    Ok(format!("accuracy 1.0, macro F1 1.0, {secs:.2}s"))
}

fn bayesian_optimizer() -> Check {
    let target = ThetaParams { vw: 0.3, ew: 0.7, gr: 0.55, ar: 0.2, aa: 0.8, ga: 0.45, qg: 0.6, qa: 0.35, gg: -0.4 };
    let f = |t: &ThetaParams| -> groundchain::Result<f64> {
        let d: f64 = t.to_array().iter().zip(target.to_array()).map(|(a, b)| (a - b).powi(2)).sum();
        Ok(1.0 - d / 9.0)
    };
    let (mut reached, mut beat) = (0, 0);
    let mut bests = Vec::new();
    for seed in 0..10 {
        let cfg = BoConfig { n_initial: 10, n_iterations: 40, seed, ..BoConfig::default() };
        let bo = optimize(f, &cfg).map_err(|e| e.to_string())?.best.unwrap().accuracy;
        let rs = random_search(f, 50, seed).map_err(|e| e.to_string())?.best.unwrap().accuracy;
        reached += (bo >= 0.95) as usize;
        beat += (bo > rs) as usize;
        bests.push(format!("{bo:.4}"));
    }
    ensure(reached >= 8 && beat >= 7, || format!("reached {reached}/10, beat random {beat}/10 ({})", bests.join(" ")))?;
    Ok(format!("reached 0.95 in {reached}/10, beat random search in {beat}/10"))
}

fn gp_correctness() -> Check {
    let mut rng = common::rng(8);
    let points: Vec<Vec<f64>> = (0..12).map(|_| vec![rng.random(), rng.random()]).collect();
    let values: Vec<f64> = points.iter().map(|p| (3.0 * p[0]).sin() + p[1] * p[1]).collect();
    for kernel in [Kernel::Matern52, Kernel::SquaredExponential] {
        let gp = GaussianProcess::fit(&points, &values, kernel, 0.3, 0.0).map_err(|e| e.to_string())?;
        for (p, v) in points.iter().zip(&values) {
            let (m, _) = gp.predict(p);
            ensure((m - v).abs() <= 1e-6, || format!("{kernel:?}: mean {m} vs {v}"))?;
        }
        for i in 0..40 {
            for j in 0..25 {
                let x = [i as f64 / 39.0 * 1.4 - 0.2, j as f64 / 24.0 * 1.4 - 0.2];
                let (_, var) = gp.predict(&x);
                ensure(var >= 0.0, || format!("{kernel:?}: variance {var} at {x:?}"))?;
            }
        }
    }
    Ok("12 points, 2 kernels, 1000-point grid".into())
}

fn bm25_conformance() -> Check {
    let docs: [(&str, &[&str]); 3] =
        [("d1", &["sun", "heat", "sun"]), ("d2", &["heat", "ice"]), ("d3", &["ice", "water", "cold", "ice"])];
    let index = Bm25Index::from_documents(docs, 1.2, 0.75).map_err(|e| e.to_string())?;
    let query: TermSet = ["sun", "ice"].iter().map(|s| s.to_string()).collect();
    // N=3, avgdl=3; idf(sun)=ln(2.5/1.5+1), idf(ice)=ln(1.5/2.5+1)
    let idf_sun = (8.0f64 / 3.0).ln();
    let idf_ice = 1.6f64.ln();
    let expected = [
        ("d1", idf_sun * (2.0 * 2.2) / (2.0 + 1.2 * (0.25 + 0.75))), // |d1| = avgdl
        ("d2", idf_ice * (1.0 * 2.2) / (1.0 + 1.2 * (0.25 + 0.75 * 2.0 / 3.0))),
        ("d3", idf_ice * (2.0 * 2.2) / (2.0 + 1.2 * (0.25 + 0.75 * 4.0 / 3.0))),
    ];
    for (doc, want) in expected {
        let got = index.score(&query, doc).map_err(|e| e.to_string())?;
        ensure((got - want).abs() <= 1e-9, || format!("{doc}: {got} vs {want}"))?;
    }

    // identical texts under ids out of insertion order
    let cfg = groundchain::TermConfig::bare();
    let mk = |id: &str, text: &str, kind| groundchain::Fact::new(id, text, kind, &cfg);
    let grounding = vec![mk("g3", "sun heat", FactKind::Grounding), mk("g1", "sun heat", FactKind::Grounding), mk("g2", "ice", FactKind::Grounding)];
    let abstract_facts = vec![mk("a2", "cold water", FactKind::Abstract), mk("a1", "cold water", FactKind::Abstract)];
    let retriever = common::retriever_for(grounding, abstract_facts, cfg);
    let q = groundchain::Question {
        id: "q".into(),
        stem: "sun".into(),
        choices: vec!["water".into(), "rock".into()],
        gold_answer: None,
        gold_explanation: None,
    };
    for _ in 0..3 {
        let r = retriever.retrieve(&q, 0, 3, 2);
        let g: Vec<&str> = r.grounding.iter().map(|f| f.fact.id.as_str()).collect();
        let a: Vec<&str> = r.abstract_facts.iter().map(|f| f.fact.id.as_str()).collect();
        ensure(g == ["g1", "g3", "g2"] && a == ["a1", "a2"], || format!("ranking {g:?} {a:?}"))?;
    }
    Ok("3 documents, id tie-break".into())
}

fn ablation_wiring() -> Check {
    let t = reference_theta();
    let family_counts = |g: &CandidateGraph, flags: &AblationFlags| {
        let m = emit_constraints(g, 2, flags);
        [
            ConstraintFamily::Root,
            ConstraintFamily::Chaining,
            ConstraintFamily::EdgeCoupling,
            ConstraintFamily::AbstractLimit,
            ConstraintFamily::GroundingNeighbor,
        ]
        .map(|f| m.count_family(f))
    };
    let full = five_node_fixture(t, AblationFlags::none());
    // V=5, E=6, two grounding facts
    ensure(family_counts(&full, &AblationFlags::none()) == [1, 5, 18, 1, 2], || "full counts".into())?;

    let flags = AblationFlags { no_chaining: true, ..AblationFlags::none() };
    let g = five_node_fixture(t, flags);
    ensure(family_counts(&g, &flags) == [0, 0, 0, 1, 2], || "no_chaining counts".into())?;
    ensure(g.nodes == full.nodes && g.edges == full.edges, || "no_chaining changed weights".into())?;

    let flags = AblationFlags { no_grounding_neighbor: true, ..AblationFlags::none() };
    let g = five_node_fixture(t, flags);
    ensure(family_counts(&g, &flags) == [1, 5, 18, 1, 0], || "no_grounding_neighbor counts".into())?;
    ensure(g.nodes == full.nodes && g.edges == full.edges, || "no_grounding_neighbor changed weights".into())?;

    let flags = AblationFlags { no_grouping: true, ..AblationFlags::none() };
    let g = five_node_fixture(t, flags);
    ensure(family_counts(&g, &flags) == [1, 5, 18, 1, 0], || "no_grouping counts".into())?;
    ensure(g.count_role(NodeRole::Abstract) == 4 && g.count_role(NodeRole::Grounding) == 0, || "no_grouping roles".into())?;
    for (n, f) in g.nodes.iter().zip(&full.nodes).skip(1) {
        ensure((n.weight - t.ar * f.relevance).abs() <= 1e-12, || format!("no_grouping node {}", n.id))?;
    }
    for (e, f) in g.edges.iter().zip(&full.edges) {
        let coef = if e.u == 0 { t.qa } else { t.aa };
        ensure((e.weight - coef * f.overlap).abs() <= 1e-12, || format!("no_grouping edge ({},{})", e.u, e.v))?;
    }

    let flags = AblationFlags { no_overlap: true, ..AblationFlags::none() };
    let g = five_node_fixture(t, flags);
    ensure(g.nodes == full.nodes, || "no_overlap changed nodes".into())?;
    for e in &g.edges {
        let want = edge_weight(g.nodes[e.u].role, g.nodes[e.v].role, 1.0, &t);
        ensure(e.weight == want, || format!("no_overlap edge ({},{})", e.u, e.v))?;
    }

    let flags = AblationFlags { no_relevance: true, ..AblationFlags::none() };
    let g = five_node_fixture(t, flags);
    ensure(g.edges == full.edges, || "no_relevance changed edges".into())?;
    for n in &g.nodes {
        ensure(n.weight == node_weight(n.role, 1.0, &t), || format!("no_relevance node {}", n.id))?;
    }

    let mut cfg = PipelineConfig::with_k(10).unwrap();
    cfg.ablation.no_tuning = true;
    ensure(cfg.effective_theta(t) == ThetaParams::SIGN_PATTERN, || "no_tuning theta".into())?;
    ensure(family_counts(&full, &cfg.ablation) == [1, 5, 18, 1, 2], || "no_tuning counts".into())?;

    // Directional check on the synthetic corpus: no ablation beats the full
    // model, and dropping chaining or grouping lets wrong choices score.
    let (grounding, abstract_facts, questions) = common::synthetic_corpus();
    let retriever = common::retriever_for(grounding, abstract_facts, common::synthetic_terms());
    let base_cfg = PipelineConfig::with_k(10).unwrap();
    let run = |ablation: AblationFlags| -> Result<(f64, usize), String> {
        let cfg = PipelineConfig { ablation, ..base_cfg };
        let prepared = prepare_all(&questions, &retriever, &cfg).map_err(|e| e.to_string())?;
        let preds = answer_all(&prepared, t, &cfg, false);
        let wrong_feasible = preds
            .iter()
            .zip(&questions)
            .map(|(p, q)| {
                let gold = q.gold_answer.unwrap();
                p.per_choice_omega.iter().enumerate().filter(|(i, w)| *i != gold && w.is_finite()).count()
            })
            .sum();
        Ok((accuracy(&preds, &questions).map_err(|e| e.to_string())?, wrong_feasible))
    };
    let (full_acc, full_wrong) = run(AblationFlags::none())?;
    ensure(full_wrong == 0, || "full model leaves wrong choices feasible".into())?;
    let mut summary = vec![format!("full {full_acc:.2}")];
    for tag in ["no-grouping", "no-overlap", "no-relevance", "no-chaining", "no-grounding-neighbor", "no-tuning"] {
        let flags: AblationFlags = tag.parse().map_err(|e: groundchain::Error| e.to_string())?;
        let (acc, wrong) = run(flags)?;
        ensure(acc <= full_acc, || format!("{tag} improves accuracy: {acc} > {full_acc}"))?;
        if matches!(tag, "no-grouping" | "no-chaining") {
            ensure(wrong > 0, || format!("{tag} left every wrong choice infeasible"))?;
        }
        summary.push(format!("{tag} {acc:.2}"));
    }
    Ok(summary.join(", "))
}

/// index -> answer -> eval on files, returning every output's bytes.
fn full_run(dir: &std::path::Path) -> Result<Vec<Vec<u8>>, String> {
    let err = |e: groundchain::Error| e.to_string();
    let (grounding, abstract_facts, questions) = common::synthetic_corpus();
    let cfg_terms = common::synthetic_terms();
    let mut g_tsv = Vec::new();
    groundchain::kb::write_kb_tsv(&grounding, &mut g_tsv).unwrap();
    let mut a_tsv = Vec::new();
    groundchain::kb::write_kb_tsv(&abstract_facts, &mut a_tsv).unwrap();
    std::fs::write(dir.join("grounding.tsv"), g_tsv).unwrap();
    std::fs::write(dir.join("abstract.tsv"), a_tsv).unwrap();
    let q_lines: Vec<String> = questions.iter().map(|q| serde_json::to_string(q).unwrap()).collect();
    std::fs::write(dir.join("questions.jsonl"), q_lines.join("\n")).unwrap();

    let grounding = load_kb(&dir.join("grounding.tsv"), FactKind::Grounding, &cfg_terms).map_err(err)?;
    let abstract_facts = load_kb(&dir.join("abstract.tsv"), FactKind::Abstract, &cfg_terms).map_err(err)?;
    let questions = load_questions(&dir.join("questions.jsonl")).map_err(err)?;

    let mut outputs = Vec::new();
    let g_kb = KnowledgeBase::new(grounding, DEFAULT_K1, DEFAULT_B).map_err(err)?;
    let a_kb = KnowledgeBase::new(abstract_facts, DEFAULT_K1, DEFAULT_B).map_err(err)?;
    for kb in [&g_kb, &a_kb] {
        let mut buf = Vec::new();
        kb.index.write_json(&mut buf).map_err(err)?;
        outputs.push(buf);
    }
    let retriever = groundchain::Retriever::new(g_kb, a_kb, cfg_terms.clone());
    let cfg = PipelineConfig::with_k(10).unwrap();
    let prepared = prepare_all(&questions, &retriever, &cfg).map_err(err)?;
    let preds = answer_all(&prepared, reference_theta(), &cfg, true);
    let mut buf = Vec::new();
    write_predictions(&preds, &mut buf).map_err(err)?;
    outputs.push(buf);
    for feature in BucketFeature::ALL {
        let rows = bucketed_report(&preds, &questions, feature, &feature.default_edges(), &cfg_terms).map_err(err)?;
        let mut buf = Vec::new();
        write_report_csv(&rows, &mut buf).map_err(err)?;
        outputs.push(buf);
    }
    let (f1, _) = explanation_f1(&preds, &questions, Averaging::Macro).map_err(err)?;
    outputs.push(format!("{} {}", accuracy(&preds, &questions).map_err(err)?, f1.f1).into_bytes());
    // answer_prepared on one question is the same code path as the batch
    let single = answer_prepared(&prepared[0], reference_theta(), &cfg, false);
    outputs.push(serde_json::to_vec(&single).unwrap());
    Ok(outputs)
}

fn determinism() -> Check {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = full_run(a.path())?;
    let second = full_run(b.path())?;
    ensure(first == second, || {
        let i = first.iter().zip(&second).position(|(x, y)| x != y).unwrap_or(0);
        format!("output {i} differs")
    })?;
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("{} outputs, {bytes} bytes identical", first.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 solver-oracle equivalence", solver_oracle_equivalence),
        ("2 constraint satisfaction", constraint_satisfaction),
        ("3 overlap properties", overlap_properties),
        ("4 weight-function conformance", weight_conformance),
        ("5 argmax scaling invariance", argmax_scaling),
        ("6 synthetic end-to-end", synthetic_end_to_end),
        ("7 bayesian optimizer", bayesian_optimizer),
        ("8 gp correctness", gp_correctness),
        ("9 bm25 conformance", bm25_conformance),
        ("10 ablation wiring", ablation_wiring),
        ("11 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 11 criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
