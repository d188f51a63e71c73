//! Knowledge-base facts and questions, plus their file formats.
//!
//! KB files are UTF-8 TSV (`id<TAB>text`, optional `id<TAB>text` header,
//! blank lines skipped) or JSONL (`{"id": .., "text": ..}` per line). The
//! format follows the extension: `.jsonl`/`.json` is JSONL, anything else TSV.
//! Question files are JSONL.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terms::{normalized_tokens, TermConfig, TermSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactKind {
    Grounding,
    Abstract,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fact {
    pub id: String,
    pub text: String,
    pub kind: FactKind,
    pub terms: TermSet,
    /// Normalized tokens with repeats, in text order. Feeds term frequencies.
    pub tokens: Vec<String>,
}

impl Fact {
    pub fn new(id: impl Into<String>, text: impl Into<String>, kind: FactKind, cfg: &TermConfig) -> Self {
        let text = text.into();
        let tokens = normalized_tokens(&text, cfg);
        let terms = tokens.iter().cloned().collect();
        Fact {
            id: id.into(),
            text,
            kind,
            terms,
            tokens,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub stem: String,
    pub choices: Vec<String>,
    #[serde(rename = "answer_index", default, skip_serializing_if = "Option::is_none")]
    pub gold_answer: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_explanation: Option<BTreeSet<String>>,
}

impl Question {
    /// The retrieval and graph-root text for one candidate: stem followed by
    /// the choice.
    pub fn hypothesis(&self, choice: usize) -> String {
        format!("{} {}", self.stem, self.choices[choice])
    }

    pub fn validate(&self) -> Result<()> {
        if self.choices.len() < 2 {
            return Err(self.invalid(format!("needs at least 2 choices, has {}", self.choices.len())));
        }
        if let Some(gold) = self.gold_answer {
            if gold >= self.choices.len() {
                return Err(self.invalid(format!("answer_index {gold} out of range")));
            }
        }
        Ok(())
    }

    /// Checks that every gold explanation id names an abstract fact.
    pub fn validate_explanation(&self, abstract_ids: &HashSet<&str>) -> Result<()> {
        if let Some(gold) = &self.gold_explanation {
            if let Some(missing) = gold.iter().find(|id| !abstract_ids.contains(id.as_str())) {
                return Err(self.invalid(format!("gold explanation id `{missing}` is not an abstract fact")));
            }
        }
        Ok(())
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidQuestion {
            id: self.id.clone(),
            reason,
        }
    }
}

#[derive(Deserialize)]
struct FactRecord {
    id: String,
    text: String,
}

fn is_jsonl(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("jsonl") | Some("json")
    )
}

/// Loads a KB file. Every record becomes a [`Fact`] of the given kind.
pub fn load_kb(path: &Path, kind: FactKind, cfg: &TermConfig) -> Result<Vec<Fact>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_kb(&text, is_jsonl(path), path, kind, cfg)
}

fn parse_kb(text: &str, jsonl: bool, path: &Path, kind: FactKind, cfg: &TermConfig) -> Result<Vec<Fact>> {
    let mut seen = HashSet::new();
    let mut facts = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let (id, body) = if jsonl {
            let rec: FactRecord = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
            (rec.id, rec.text)
        } else {
            let (id, body) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected `id<TAB>text`".into()))?;
            if facts.is_empty() && seen.is_empty() && id == "id" && body == "text" {
                continue;
            }
            (id.to_string(), body.to_string())
        };
        if id.is_empty() {
            return Err(parse_err("empty fact id".into()));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        facts.push(Fact::new(id, body, kind, cfg));
    }
    Ok(facts)
}

/// Writes facts as TSV. Tabs and newlines inside text are replaced by spaces.
pub fn write_kb_tsv<W: Write>(facts: &[Fact], mut out: W) -> std::io::Result<()> {
    for fact in facts {
        let text: String = fact
            .text
            .chars()
            .map(|c| if matches!(c, '\t' | '\n' | '\r') { ' ' } else { c })
            .collect();
        writeln!(out, "{}\t{}", fact.id, text)?;
    }
    Ok(())
}

pub fn load_questions(path: &Path) -> Result<Vec<Question>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let q: Question = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        q.validate()?;
        if !seen.insert(q.id.clone()) {
            return Err(Error::InvalidQuestion {
                id: q.id,
                reason: "duplicate question id".into(),
            });
        }
        out.push(q);
    }
    Ok(out)
}
