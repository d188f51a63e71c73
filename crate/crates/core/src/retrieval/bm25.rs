//! Okapi BM25 over fact token streams.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::Fact;
use crate::terms::TermSet;

pub const DEFAULT_K1: f64 = 1.2;
pub const DEFAULT_B: f64 = 0.75;

const INDEX_FORMAT: &str = "groundchain-bm25";
const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: String,
    pub tf: u32,
}

/// Inverted index with document statistics. All maps are ordered, so the
/// index (and its serialized form) does not depend on input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bm25Index {
    pub postings: BTreeMap<String, Vec<Posting>>,
    pub doc_lengths: BTreeMap<String, usize>,
    pub avg_doc_length: f64,
    pub doc_count: usize,
    pub k1: f64,
    pub b: f64,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    #[serde(flatten)]
    index: Bm25Index,
}

pub fn build_index(facts: &[Fact], k1: f64, b: f64) -> Result<Bm25Index> {
    Bm25Index::from_documents(facts.iter().map(|f| (f.id.as_str(), f.tokens.as_slice())), k1, b)
}

impl Bm25Index {
    /// Builds an index from `(doc id, tokens)` pairs. Duplicate ids are
    /// rejected.
    pub fn from_documents<'a, I, T>(docs: I, k1: f64, b: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a [T])>,
        T: AsRef<str> + 'a,
    {
        if !(k1 > 0.0) || !(0.0..=1.0).contains(&b) {
            return Err(Error::Config(format!("invalid BM25 parameters k1={k1} b={b}")));
        }
        let mut postings: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();
        let mut doc_lengths = BTreeMap::new();
        for (id, tokens) in docs {
            if doc_lengths.insert(id.to_string(), tokens.len()).is_some() {
                return Err(Error::DuplicateId(id.to_string()));
            }
            for tok in tokens {
                *postings
                    .entry(tok.as_ref().to_string())
                    .or_default()
                    .entry(id.to_string())
                    .or_default() += 1;
            }
        }
        if doc_lengths.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let doc_count = doc_lengths.len();
        let total: usize = doc_lengths.values().sum();
        let postings = postings
            .into_iter()
            .map(|(term, docs)| {
                let list = docs.into_iter().map(|(doc, tf)| Posting { doc, tf }).collect();
                (term, list)
            })
            .collect();
        Ok(Bm25Index {
            postings,
            doc_lengths,
            avg_doc_length: total as f64 / doc_count as f64,
            doc_count,
            k1,
            b,
        })
    }

    pub fn contains(&self, doc: &str) -> bool {
        self.doc_lengths.contains_key(doc)
    }

    pub fn document_frequency(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    /// `ln((N - df + 0.5) / (df + 0.5) + 1)`
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.doc_count as f64;
        let df = self.document_frequency(term) as f64;
        ((n - df + 0.5) / (df + 0.5) + 1.0).ln()
    }

    fn term_score(&self, idf: f64, tf: u32, doc_len: usize) -> f64 {
        let tf = tf as f64;
        // An all-empty corpus has avg length 0; every length ratio is then 0.
        let ratio = if self.avg_doc_length > 0.0 {
            doc_len as f64 / self.avg_doc_length
        } else {
            0.0
        };
        let norm = self.k1 * (1.0 - self.b + self.b * ratio);
        idf * (tf * (self.k1 + 1.0)) / (tf + norm)
    }

    pub fn score(&self, query: &TermSet, doc: &str) -> Result<f64> {
        let doc_len = *self
            .doc_lengths
            .get(doc)
            .ok_or_else(|| Error::UnknownFact(doc.to_string()))?;
        let mut total = 0.0;
        for term in query {
            let Some(list) = self.postings.get(term) else { continue };
            if let Ok(pos) = list.binary_search_by(|p| p.doc.as_str().cmp(doc)) {
                total += self.term_score(self.idf(term), list[pos].tf, doc_len);
            }
        }
        Ok(total)
    }

    /// Scores every indexed document against `query`. Documents sharing no
    /// term score 0.
    pub fn score_all(&self, query: &TermSet) -> BTreeMap<&str, f64> {
        let mut scores: BTreeMap<&str, f64> =
            self.doc_lengths.keys().map(|d| (d.as_str(), 0.0)).collect();
        for term in query {
            let Some(list) = self.postings.get(term) else { continue };
            let idf = self.idf(term);
            for p in list {
                let len = self.doc_lengths[&p.doc];
                *scores.get_mut(p.doc.as_str()).unwrap() += self.term_score(idf, p.tf, len);
            }
        }
        scores
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let file = IndexFile {
            format: INDEX_FORMAT.to_string(),
            version: INDEX_VERSION,
            index: self.clone(),
        };
        serde_json::to_writer(out, &file)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self> {
        let file: IndexFile = serde_json::from_reader(input)?;
        if file.format != INDEX_FORMAT || file.version != INDEX_VERSION {
            return Err(Error::Config(format!(
                "unsupported index artifact {} v{}",
                file.format, file.version
            )));
        }
        Ok(file.index)
    }
}

pub fn score_bm25(index: &Bm25Index, query: &TermSet, fact_id: &str) -> Result<f64> {
    index.score(query, fact_id)
}
