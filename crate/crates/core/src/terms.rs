//! Unique-term extraction and lexical overlap.
//!
//! A text span is reduced to a set of normalized terms: split on every
//! non-alphanumeric character, optionally lowercase, map each token through a
//! lemma table, drop stopwords, and (when a content lexicon is configured)
//! keep only lexicon members. Overlap between two spans is then
//! `|a ∩ b| / max(|a|, |b|)`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of normalized terms. Ordered so that iteration and serialization are
/// deterministic.
pub type TermSet = BTreeSet<String>;

/// English stopwords shipped as the default filter.
pub const ENGLISH_STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
    "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
    "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same", "she",
    "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves",
];

/// Normalization settings for term extraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermConfig {
    pub stopwords: BTreeSet<String>,
    /// Surface form to lemma. Missing entries lemmatize to themselves.
    pub lemma_table: BTreeMap<String, String>,
    /// When present, only lemmas in this set survive. Stands in for a
    /// part-of-speech and dictionary filter.
    pub content_lexicon: Option<BTreeSet<String>>,
    pub lowercase: bool,
}

impl Default for TermConfig {
    fn default() -> Self {
        TermConfig {
            stopwords: ENGLISH_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            lemma_table: BTreeMap::new(),
            content_lexicon: None,
            lowercase: true,
        }
    }
}

/// On-disk form of a [`TermConfig`]. Each table may be given inline or as a
/// path to a file (one entry per line; lemma files use `surface<TAB>lemma`).
/// Relative paths resolve against the config file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermConfigFile {
    stopwords: Option<Vec<String>>,
    stopwords_file: Option<String>,
    lemmas: Option<BTreeMap<String, String>>,
    lemmas_file: Option<String>,
    lexicon: Option<Vec<String>>,
    lexicon_file: Option<String>,
    lowercase: Option<bool>,
}

impl TermConfig {
    /// A config with no stopwords, no lemmas and no lexicon.
    pub fn bare() -> Self {
        TermConfig {
            stopwords: BTreeSet::new(),
            lemma_table: BTreeMap::new(),
            content_lexicon: None,
            lowercase: true,
        }
    }

    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.stopwords = words.into_iter().map(Into::into).collect();
        self
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let raw: TermConfigFile = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut cfg = TermConfig::default();

        if let Some(words) = raw.stopwords {
            cfg.stopwords = words.into_iter().collect();
        }
        if let Some(file) = raw.stopwords_file {
            cfg.stopwords = read_lines(&base.join(file))?.into_iter().collect();
        }
        if let Some(lemmas) = raw.lemmas {
            cfg.lemma_table = lemmas;
        }
        if let Some(file) = raw.lemmas_file {
            let path = base.join(file);
            let mut table = BTreeMap::new();
            for (idx, line) in read_lines(&path)?.into_iter().enumerate() {
                let (surface, lemma) = line.split_once('\t').ok_or_else(|| Error::Parse {
                    path: path.clone(),
                    line: idx + 1,
                    message: "expected `surface<TAB>lemma`".into(),
                })?;
                table.insert(surface.trim().to_string(), lemma.trim().to_string());
            }
            cfg.lemma_table = table;
        }
        if let Some(words) = raw.lexicon {
            cfg.content_lexicon = Some(words.into_iter().collect());
        }
        if let Some(file) = raw.lexicon_file {
            cfg.content_lexicon = Some(read_lines(&base.join(file))?.into_iter().collect());
        }
        if let Some(lowercase) = raw.lowercase {
            cfg.lowercase = lowercase;
        }
        Ok(cfg)
    }

    fn normalize_token(&self, token: &str) -> Option<String> {
        let token = if self.lowercase {
            token.to_lowercase()
        } else {
            token.to_string()
        };
        let lemma = self.lemma_table.get(&token).cloned().unwrap_or(token);
        if self.stopwords.contains(&lemma) {
            return None;
        }
        match &self.content_lexicon {
            Some(lexicon) if !lexicon.contains(&lemma) => None,
            _ => Some(lemma),
        }
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

/// Normalized tokens of `text` in order, repeats kept. Used for term
/// frequencies; [`extract_unique_terms`] is the deduplicated view.
pub fn normalized_tokens(text: &str, cfg: &TermConfig) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .filter_map(|t| cfg.normalize_token(t))
        .collect()
}

pub fn extract_unique_terms(text: &str, cfg: &TermConfig) -> TermSet {
    normalized_tokens(text, cfg).into_iter().collect()
}

/// Lexical overlap `|a ∩ b| / max(|a|, |b|)`, with two empty sets scoring 0.
pub fn compute_overlap(a: &TermSet, b: &TermSet) -> f64 {
    let denom = a.len().max(b.len());
    if denom == 0 {
        return 0.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let shared = small.iter().filter(|t| large.contains(*t)).count();
    shared as f64 / denom as f64
}
