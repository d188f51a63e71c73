use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use groundchain::metrics::{accuracy, bucketed_report, explanation_f1, write_report_csv, Averaging, BucketFeature};
use groundchain::pipeline::{answer_all, prepare_all, read_predictions, write_predictions, PreparedQuestion};
use groundchain::retrieval::{Bm25Index, UnificationModel, DEFAULT_B, DEFAULT_K1, DEFAULT_LAMBDA_MIX, DEFAULT_TOP_J};
use groundchain::solver::DEFAULT_ABSTRACT_LIMIT;
use groundchain::trainer::{train as run_bo, BoConfig};
use groundchain::{
    emit_constraints, load_kb, load_questions, Error, FactKind, KnowledgeBase, NodeRole, PipelineConfig, Prediction, Question,
    Retriever, TermConfig, ThetaParams,
};
use log::info;
use serde_json::json;

use crate::options::{Options, ScorerArg};

const DEFAULT_K: usize = 30;
const GROUNDING_INDEX: &str = "grounding.index.json";
const ABSTRACT_INDEX: &str = "abstract.index.json";

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    Ok(BufWriter::new(file))
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let file = File::open(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    Ok(BufReader::new(file))
}

/// `name.ext`, or `name.<ablation tag>.ext` when an ablation is active.
fn tagged(opts: &Options, name: &str, ext: &str) -> anyhow::Result<String> {
    Ok(match opts.ablation()?.tag() {
        Some(tag) => format!("{name}.{tag}.{ext}"),
        None => format!("{name}.{ext}"),
    })
}

fn term_config(opts: &Options) -> anyhow::Result<TermConfig> {
    Ok(match &opts.term_config {
        Some(path) => TermConfig::from_json_file(path)?,
        None => TermConfig::default(),
    })
}

fn load_theta(opts: &Options) -> anyhow::Result<ThetaParams> {
    let Some(path) = &opts.theta else { return Ok(ThetaParams::SIGN_PATTERN) };
    let theta: ThetaParams = serde_json::from_reader(open(path)?)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    theta.validate()?;
    Ok(theta)
}

fn pipeline_config(opts: &Options) -> anyhow::Result<PipelineConfig> {
    let mut cfg = PipelineConfig::with_k(opts.k.unwrap_or(DEFAULT_K))?;
    if let Some(l) = opts.l {
        cfg.l = l;
    }
    if let Some(m) = opts.m {
        cfg.m = m;
    }
    cfg.abstract_limit = opts.big_k.unwrap_or(DEFAULT_ABSTRACT_LIMIT);
    cfg.ablation = opts.ablation()?;
    cfg.validate()?;
    Ok(cfg)
}

fn knowledge_base(opts: &Options, path: &Path, kind: FactKind, index_file: &str, terms: &TermConfig) -> anyhow::Result<KnowledgeBase> {
    let facts = load_kb(path, kind, terms)?;
    let kb = match &opts.index {
        Some(dir) => {
            let index = Bm25Index::read_json(open(&dir.join(index_file))?)?;
            KnowledgeBase::with_index(facts, index)?
        }
        None => KnowledgeBase::new(facts, opts.k1.unwrap_or(DEFAULT_K1), opts.b.unwrap_or(DEFAULT_B))?,
    };
    Ok(kb)
}

/// Builds the retriever. `fallback_train` supplies explanations for the
/// unification scorer when `--train-questions` is absent.
fn retriever(opts: &Options, terms: &TermConfig, fallback_train: Option<&[Question]>) -> anyhow::Result<Retriever> {
    let grounding = knowledge_base(opts, opts.require(&opts.grounding_kb, "grounding-kb")?, FactKind::Grounding, GROUNDING_INDEX, terms)?;
    let abstract_kb = knowledge_base(opts, opts.require(&opts.abstract_kb, "abstract-kb")?, FactKind::Abstract, ABSTRACT_INDEX, terms)?;
    if opts.scorer != Some(ScorerArg::Unification) {
        return Ok(Retriever::new(grounding, abstract_kb, terms.clone()));
    }
    let loaded;
    let train = match (&opts.train_questions, fallback_train) {
        (Some(path), _) => {
            loaded = load_questions(path)?;
            loaded.as_slice()
        }
        (None, Some(qs)) => qs,
        (None, None) => return Err(Error::Config("--scorer unification needs --train-questions".into()).into()),
    };
    let abstract_ids: HashSet<&str> = abstract_kb.facts.iter().map(|f| f.id.as_str()).collect();
    let model = UnificationModel::new(
        train,
        &abstract_ids,
        terms,
        opts.lambda_mix.unwrap_or(DEFAULT_LAMBDA_MIX),
        opts.top_j.unwrap_or(DEFAULT_TOP_J),
        opts.k1.unwrap_or(DEFAULT_K1),
        opts.b.unwrap_or(DEFAULT_B),
    )?;
    Ok(Retriever::new(grounding, abstract_kb, terms.clone()).with_unification(model))
}

struct Prepared {
    questions: Vec<Question>,
    prepared: Vec<PreparedQuestion>,
    cfg: PipelineConfig,
    retriever: Retriever,
}

fn prepare(opts: &Options, fallback_train: bool) -> anyhow::Result<Prepared> {
    let terms = term_config(opts)?;
    let questions = load_questions(opts.require(&opts.questions, "questions")?)?;
    let cfg = pipeline_config(opts)?;
    let retriever = retriever(opts, &terms, fallback_train.then_some(questions.as_slice()))?;
    let prepared = prepare_all(&questions, &retriever, &cfg)?;
    Ok(Prepared { questions, prepared, cfg, retriever })
}

fn write_models(dir: &Path, predictions: &[Prediction], cfg: &PipelineConfig) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for p in predictions {
        for dump in p.subgraphs.iter().flatten() {
            let model = emit_constraints(&dump.graph, cfg.abstract_limit, &cfg.ablation);
            let path = dir.join(format!("{}.choice{}.lp", p.question_id, dump.choice));
            let mut out = create(&path)?;
            out.write_all(model.to_lp_string().as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn index(opts: &Options) -> anyhow::Result<()> {
    let terms = term_config(opts)?;
    let k1 = opts.k1.unwrap_or(DEFAULT_K1);
    let b = opts.b.unwrap_or(DEFAULT_B);
    let out = opts.out_dir()?;
    let inputs = [
        (opts.require(&opts.grounding_kb, "grounding-kb")?, FactKind::Grounding, GROUNDING_INDEX),
        (opts.require(&opts.abstract_kb, "abstract-kb")?, FactKind::Abstract, ABSTRACT_INDEX),
    ];
    for (path, kind, file) in inputs {
        let kb = KnowledgeBase::new(load_kb(path, kind, &terms)?, k1, b)?;
        let mut w = create(&out.join(file))?;
        kb.index.write_json(&mut w)?;
        w.flush()?;
        println!("{file}: {} documents, {} terms", kb.len(), kb.index.postings.len());
    }
    Ok(())
}

pub fn answer(opts: &Options, dump_graphs: bool, dump_model: Option<&Path>) -> anyhow::Result<()> {
    let theta = load_theta(opts)?;
    let Prepared { questions, prepared, cfg, .. } = prepare(opts, false)?;
    let keep = dump_graphs || dump_model.is_some();
    let mut predictions = answer_all(&prepared, theta, &cfg, keep);
    if let Some(dir) = dump_model {
        write_models(dir, &predictions, &cfg)?;
    }
    if !dump_graphs {
        predictions.iter_mut().for_each(|p| p.subgraphs = None);
    }
    let path = opts.out_dir()?.join(tagged(opts, "predictions", "jsonl")?);
    let mut w = create(&path)?;
    write_predictions(&predictions, &mut w)?;
    w.flush()?;
    println!("wrote {} predictions to {}", predictions.len(), path.display());
    if questions.iter().all(|q| q.gold_answer.is_some()) && !questions.is_empty() {
        println!("accuracy {:.4}", accuracy(&predictions, &questions)?);
    }
    Ok(())
}

pub fn train(opts: &Options) -> anyhow::Result<()> {
    let Prepared { prepared, cfg, .. } = prepare(opts, true)?;
    let defaults = BoConfig::default();
    let bo = BoConfig {
        n_initial: opts.n_initial.unwrap_or(defaults.n_initial),
        n_iterations: opts.n_iterations.unwrap_or(defaults.n_iterations),
        kernel: opts.kernel.map(Into::into).unwrap_or(defaults.kernel),
        length_scale: opts.length_scale.unwrap_or(defaults.length_scale),
        noise: opts.noise.unwrap_or(defaults.noise),
        acq_restarts: opts.acq_restarts.unwrap_or(defaults.acq_restarts),
        acq_samples: opts.acq_samples.unwrap_or(defaults.acq_samples),
        seed: opts.seed.unwrap_or(defaults.seed),
        ..defaults
    };
    let trace = run_bo(&prepared, &cfg, &bo)?;
    let out = opts.out_dir()?;
    let mut w = create(&out.join(tagged(opts, "trace", "jsonl")?))?;
    trace.write_jsonl(&mut w)?;
    w.flush()?;
    let best = trace.best.as_ref().expect("trace is nonempty");
    let theta_path = out.join(tagged(opts, "theta", "json")?);
    let mut w = create(&theta_path)?;
    serde_json::to_writer_pretty(&mut w, &best.theta)?;
    writeln!(w)?;
    w.flush()?;
    info!("{} evaluations", trace.len());
    println!("best accuracy {:.4}; parameters written to {}", best.accuracy, theta_path.display());
    Ok(())
}

pub fn eval(opts: &Options, predictions: &Path, micro: bool, edges: [Option<Vec<f64>>; 3]) -> anyhow::Result<()> {
    let terms = term_config(opts)?;
    let questions = load_questions(opts.require(&opts.questions, "questions")?)?;
    let preds = read_predictions(open(predictions)?)?;
    let gold_ids: HashSet<&str> = questions.iter().map(|q| q.id.as_str()).collect();
    let pred_ids: HashSet<&str> = preds.iter().map(|p| p.question_id.as_str()).collect();
    if gold_ids != pred_ids || pred_ids.len() != preds.len() {
        let missing = gold_ids.symmetric_difference(&pred_ids).count();
        return Err(Error::Config(format!(
            "prediction ids do not match question ids ({missing} differ, {} predictions for {} questions)",
            preds.len(),
            questions.len()
        ))
        .into());
    }
    let averaging = if micro { Averaging::Micro } else { Averaging::Macro };
    let acc = accuracy(&preds, &questions)?;
    let (f1, n_explained) = explanation_f1(&preds, &questions, averaging)?;
    println!("accuracy {acc:.4}");
    println!("explanation F1 ({}) {:.4} over {n_explained} questions", if micro { "micro" } else { "macro" }, f1.f1);

    let out = opts.out_dir()?;
    for (feature, edges) in BucketFeature::ALL.into_iter().zip(edges) {
        let edges = edges.unwrap_or_else(|| feature.default_edges());
        let rows = bucketed_report(&preds, &questions, feature, &edges, &terms)?;
        let mut w = create(&out.join(tagged(opts, &format!("report_{}", feature.name()), "csv")?))?;
        write_report_csv(&rows, &mut w)?;
        w.flush()?;
    }
    let summary = json!({
        "accuracy": acc,
        "explanation_f1": f1,
        "averaging": averaging,
        "questions": preds.len(),
        "questions_with_explanations": n_explained,
    });
    let mut w = create(&out.join(tagged(opts, "metrics", "json")?))?;
    serde_json::to_writer_pretty(&mut w, &summary)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn explain(opts: &Options, question_id: Option<&str>, dump_model: Option<&Path>) -> anyhow::Result<()> {
    let theta = load_theta(opts)?;
    let Prepared { questions, mut prepared, cfg, retriever } = prepare(opts, false)?;
    if let Some(id) = question_id {
        prepared.retain(|p| p.question_id == id);
        if prepared.is_empty() {
            return Err(Error::Config(format!("no question with id `{id}`")).into());
        }
    }
    let predictions = answer_all(&prepared, theta, &cfg, true);
    if let Some(dir) = dump_model {
        write_models(dir, &predictions, &cfg)?;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for p in &predictions {
        let q = questions.iter().find(|q| q.id == p.question_id).expect("prepared from these questions");
        writeln!(out, "{}: {}", q.id, q.stem)?;
        for dump in p.subgraphs.iter().flatten() {
            let marker = if dump.choice == p.chosen_index { '*' } else { ' ' };
            let score = match dump.solution.objective_value {
                Some(v) => format!("{v:.4}"),
                None => "infeasible".to_string(),
            };
            writeln!(out, " {marker} [{}] {} ({score})", dump.choice, q.choices[dump.choice])?;
            for &v in &dump.solution.selected_vertices {
                let node = &dump.graph.nodes[v];
                if node.role == NodeRole::Question {
                    continue;
                }
                let id = node.fact_id.as_deref().unwrap_or("?");
                let (kind, fact) = match node.fact_kind {
                    Some(FactKind::Grounding) => ("grounding", retriever.grounding.get(id)),
                    _ => ("abstract", retriever.abstract_kb.get(id)),
                };
                let text = fact.map(|f| f.text.as_str()).unwrap_or("");
                writeln!(out, "       {kind:<9} {id}  R={:.3}  {text}", node.relevance)?;
            }
        }
    }
    Ok(())
}
