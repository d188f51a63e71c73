//! Accuracy, explanation F1 and bucketed error-analysis reports.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::Question;
use crate::pipeline::Prediction;
use crate::terms::{compute_overlap, extract_unique_terms, TermConfig};

fn index_questions(questions: &[Question]) -> HashMap<&str, &Question> {
    questions.iter().map(|q| (q.id.as_str(), q)).collect()
}

fn lookup<'a>(by_id: &HashMap<&str, &'a Question>, id: &str) -> Result<&'a Question> {
    by_id
        .get(id)
        .copied()
        .ok_or_else(|| Error::Config(format!("prediction for unknown question `{id}`")))
}

/// Fraction of predictions whose chosen index equals the gold answer.
pub fn accuracy(predictions: &[Prediction], questions: &[Question]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Config("no predictions to score".into()));
    }
    let by_id = index_questions(questions);
    let mut correct = 0usize;
    for p in predictions {
        let q = lookup(&by_id, &p.question_id)?;
        let gold = q.gold_answer.ok_or_else(|| Error::MissingGold(q.id.clone()))?;
        if p.chosen_index == gold {
            correct += 1;
        }
    }
    Ok(correct as f64 / predictions.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Score {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl F1Score {
    fn from_counts(hits: usize, predicted: usize, gold: usize) -> Self {
        if predicted == 0 && gold == 0 {
            return F1Score {
                precision: 1.0,
                recall: 1.0,
                f1: 1.0,
            };
        }
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(hits, predicted);
        let recall = ratio(hits, gold);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        F1Score { precision, recall, f1 }
    }
}

/// Set precision, recall and F1 of predicted against gold fact ids. Two empty
/// sets score 1; an empty side against a nonempty one scores 0.
pub fn f1_at_k(predicted: &BTreeSet<String>, gold: &BTreeSet<String>) -> F1Score {
    let hits = predicted.intersection(gold).count();
    F1Score::from_counts(hits, predicted.len(), gold.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    #[default]
    Macro,
    Micro,
}

/// Explanation F1 over questions that carry a gold explanation. Returns the
/// score and the number of questions it covers.
pub fn explanation_f1(predictions: &[Prediction], questions: &[Question], averaging: Averaging) -> Result<(F1Score, usize)> {
    let by_id = index_questions(questions);
    let mut per_question = Vec::new();
    let (mut hits, mut predicted, mut gold_total) = (0, 0, 0);
    for p in predictions {
        let q = lookup(&by_id, &p.question_id)?;
        let Some(gold) = &q.gold_explanation else { continue };
        let pred: BTreeSet<String> = p.explanation.iter().cloned().collect();
        per_question.push(f1_at_k(&pred, gold));
        hits += pred.intersection(gold).count();
        predicted += pred.len();
        gold_total += gold.len();
    }
    let n = per_question.len();
    if n == 0 {
        return Ok((F1Score::from_counts(0, 0, 0), 0));
    }
    let score = match averaging {
        Averaging::Micro => F1Score::from_counts(hits, predicted, gold_total),
        Averaging::Macro => {
            let mean = |f: fn(&F1Score) -> f64| per_question.iter().map(f).sum::<f64>() / n as f64;
            F1Score {
                precision: mean(|s| s.precision),
                recall: mean(|s| s.recall),
                f1: mean(|s| s.f1),
            }
        }
    };
    Ok((score, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BucketFeature {
    /// Number of facts in the gold explanation.
    ExplanationLength,
    /// Largest term overlap between the gold choice and any other choice.
    ChoiceTermOverlap,
    /// Unique terms in the stem plus the gold choice.
    UniqueTermCount,
}

impl BucketFeature {
    pub const ALL: [BucketFeature; 3] = [
        BucketFeature::ExplanationLength,
        BucketFeature::ChoiceTermOverlap,
        BucketFeature::UniqueTermCount,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BucketFeature::ExplanationLength => "explanation_length",
            BucketFeature::ChoiceTermOverlap => "choice_term_overlap",
            BucketFeature::UniqueTermCount => "unique_term_count",
        }
    }

    /// Default bucket lower bounds.
    pub fn default_edges(&self) -> Vec<f64> {
        match self {
            BucketFeature::ExplanationLength => vec![0.0, 2.0, 4.0, 6.0, 8.0],
            BucketFeature::ChoiceTermOverlap => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            BucketFeature::UniqueTermCount => vec![0.0, 5.0, 10.0, 15.0, 20.0],
        }
    }

    /// Feature value for a question, if computable.
    pub fn value(&self, question: &Question, cfg: &TermConfig) -> Option<f64> {
        match self {
            BucketFeature::ExplanationLength => question.gold_explanation.as_ref().map(|g| g.len() as f64),
            BucketFeature::ChoiceTermOverlap => {
                let gold = question.gold_answer?;
                let gold_terms = extract_unique_terms(&question.choices[gold], cfg);
                let best = question
                    .choices
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != gold)
                    .map(|(_, c)| compute_overlap(&gold_terms, &extract_unique_terms(c, cfg)))
                    .fold(0.0, f64::max);
                Some(best)
            }
            BucketFeature::UniqueTermCount => {
                let gold = question.gold_answer?;
                Some(extract_unique_terms(&question.hypothesis(gold), cfg).len() as f64)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketRow {
    pub bucket: String,
    pub lower: f64,
    pub upper: Option<f64>,
    pub n: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
}

/// Partitions questions by `feature` into buckets with the given ascending
/// lower bounds: bucket `i` covers `[edges[i], edges[i+1])`, the last one is
/// open above, and the first also takes anything below `edges[0]`. Questions
/// whose feature is not computable are left out.
pub fn bucketed_report(
    predictions: &[Prediction],
    questions: &[Question],
    feature: BucketFeature,
    edges: &[f64],
    cfg: &TermConfig,
) -> Result<Vec<BucketRow>> {
    if edges.is_empty() || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("bucket edges must be nonempty and strictly ascending".into()));
    }
    let by_id = index_questions(questions);
    let mut rows: Vec<BucketRow> = edges
        .iter()
        .enumerate()
        .map(|(i, &lo)| {
            let upper = edges.get(i + 1).copied();
            BucketRow {
                bucket: match upper {
                    Some(hi) => format!("[{lo}, {hi})"),
                    None => format!("[{lo}, inf)"),
                },
                lower: lo,
                upper,
                n: 0,
                correct: 0,
                accuracy: None,
            }
        })
        .collect();
    for p in predictions {
        let q = lookup(&by_id, &p.question_id)?;
        let (Some(value), Some(gold)) = (feature.value(q, cfg), q.gold_answer) else {
            continue;
        };
        let slot = edges.iter().rposition(|&lo| value >= lo).unwrap_or(0);
        rows[slot].n += 1;
        if p.chosen_index == gold {
            rows[slot].correct += 1;
        }
    }
    for row in &mut rows {
        if row.n > 0 {
            row.accuracy = Some(row.correct as f64 / row.n as f64);
        }
    }
    Ok(rows)
}

pub fn write_report_csv<W: Write>(rows: &[BucketRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bucket", "lower", "upper", "n", "correct", "accuracy"])?;
    for r in rows {
        w.write_record([
            r.bucket.clone(),
            r.lower.to_string(),
            r.upper.map(|u| u.to_string()).unwrap_or_default(),
            r.n.to_string(),
            r.correct.to_string(),
            r.accuracy.map(|a| a.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    fn q(id: &str, choices: &[&str], gold: usize, expl: &[&str]) -> Question {
        Question {
            id: id.into(),
            stem: "what happens".into(),
            choices: choices.iter().map(|s| s.to_string()).collect(),
            gold_answer: Some(gold),
            gold_explanation: Some(set(expl)),
        }
    }

    fn pred(id: &str, chosen: usize, expl: &[&str]) -> Prediction {
        Prediction {
            question_id: id.into(),
            chosen_index: chosen,
            per_choice_omega: vec![],
            explanation: expl.iter().map(|s| s.to_string()).collect(),
            subgraphs: None,
        }
    }

    #[test]
    fn f1_examples() {
        let s = f1_at_k(&set(&["f1", "f3"]), &set(&["f1", "f2"]));
        assert_eq!((s.precision, s.recall, s.f1), (0.5, 0.5, 0.5));
        assert_eq!(f1_at_k(&set(&["a"]), &set(&["a"])).f1, 1.0);
        assert_eq!(f1_at_k(&set(&[]), &set(&["a"])).f1, 0.0);
        assert_eq!(f1_at_k(&set(&[]), &set(&[])).f1, 1.0);
        let s = f1_at_k(&set(&["a"]), &set(&[]));
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn accuracy_counts() {
        let qs: Vec<Question> = (0..4).map(|i| q(&format!("q{i}"), &["a", "b"], 0, &[])).collect();
        let preds: Vec<Prediction> = (0..4).map(|i| pred(&format!("q{i}"), usize::from(i == 3), &[])).collect();
        assert_eq!(accuracy(&preds, &qs).unwrap(), 0.75);
        let none: Vec<Prediction> = (0..4).map(|i| pred(&format!("q{i}"), 1, &[])).collect();
        assert_eq!(accuracy(&none, &qs).unwrap(), 0.0);
        let mut missing = qs.clone();
        missing[0].gold_answer = None;
        assert!(matches!(accuracy(&preds, &missing), Err(Error::MissingGold(_))));
        assert!(accuracy(&[pred("zz", 0, &[])], &qs).is_err());
    }

    #[test]
    fn macro_and_micro() {
        let qs = vec![q("a", &["x", "y"], 0, &["f1", "f2"]), q("b", &["x", "y"], 0, &["f3"])];
        let preds = vec![pred("a", 0, &["f1"]), pred("b", 0, &["f3"])];
        let (m, n) = explanation_f1(&preds, &qs, Averaging::Macro).unwrap();
        assert_eq!(n, 2);
        // (2/3 + 1) / 2
        assert!((m.f1 - 5.0 / 6.0).abs() < 1e-12);
        let (mi, _) = explanation_f1(&preds, &qs, Averaging::Micro).unwrap();
        // P = 2/2, R = 2/3
        assert!((mi.f1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn buckets() {
        let qs = vec![
            q("a", &["x", "y"], 0, &["f1"]),
            q("b", &["x", "y"], 0, &["f1", "f2"]),
            q("c", &["x", "y"], 0, &["f1", "f2", "f3"]),
            q("d", &["x", "y"], 0, &["f1", "f2", "f3", "f4"]),
        ];
        let preds = vec![pred("a", 0, &[]), pred("b", 1, &[]), pred("c", 0, &[]), pred("d", 0, &[])];
        let cfg = TermConfig::default();
        let rows = bucketed_report(&preds, &qs, BucketFeature::ExplanationLength, &[0.0, 3.0], &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].n, rows[1].n), (2, 2));
        assert_eq!(rows[0].accuracy, Some(0.5));
        assert_eq!(rows[1].accuracy, Some(1.0));

        let one = bucketed_report(&preds, &qs, BucketFeature::ExplanationLength, &[0.0], &cfg).unwrap();
        assert_eq!(one[0].accuracy, Some(accuracy(&preds, &qs).unwrap()));

        let mut buf = Vec::new();
        write_report_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("bucket,lower,upper,n,correct,accuracy\n"));
    }

    #[test]
    fn identical_choices_overlap_one() {
        let cfg = TermConfig::default();
        let question = q("a", &["hot water", "hot water", "hot water"], 1, &[]);
        assert_eq!(BucketFeature::ChoiceTermOverlap.value(&question, &cfg), Some(1.0));
    }
}
