//! Weighted term extraction for word clouds.

mod collocation;
mod lda;
mod tfidf;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{split_text, Document};
use crate::sentiment::DocumentScore;

pub use collocation::{bigram_collocations, Collocation};
pub use lda::{lda_fit, lda_fit_tokens, LdaParams, TopicModel};
pub use tfidf::{tfidf, tfidf_tokens};

#[derive(Debug, Error)]
pub enum TermsError {
    #[error("document `{0}` has no score")]
    MissingScore(String),
    #[error("corpus has no usable tokens")]
    EmptyCorpus,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = TermsError> = std::result::Result<T, E>;

/// English stopword list, one term per line.
pub const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Stopwords(BTreeSet<String>);

impl Stopwords {
    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }

    /// Content words: not a stopword and containing a letter.
    pub fn keeps(&self, term: &str) -> bool {
        !self.contains(term) && term.chars().any(char::is_alphabetic)
    }
}

/// Normalized tokens of each sentence; a document without sentences gives
/// an empty list.
pub fn sentence_norms(doc: &Document) -> Vec<Vec<String>> {
    split_text(&doc.text)
        .map(|s| {
            s.into_iter()
                .map(|(_, toks)| toks.into_iter().map(|t| t.norm).collect())
                .collect()
        })
        .unwrap_or_default()
}

pub(crate) fn content_tokens(doc: &Document, stopwords: &Stopwords) -> Vec<String> {
    sentence_norms(doc)
        .into_iter()
        .flatten()
        .filter(|t| stopwords.keeps(t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrigin {
    Tfidf,
    Bigram,
    /// Reserved for externally supplied named entities.
    Entity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub term: String,
    pub score: f64,
    /// `None` when terms are aggregated over the whole corpus.
    pub day: Option<NaiveDate>,
    pub origin: TermOrigin,
}

#[derive(Debug, Clone)]
pub struct TermParams {
    pub stopwords: Stopwords,
    pub min_count: usize,
    /// Collocations kept for the word cloud.
    pub top_n: usize,
    pub day_bucket: bool,
}

impl Default for TermParams {
    fn default() -> Self {
        Self {
            stopwords: Stopwords::english(),
            min_count: 3,
            top_n: 50,
            day_bucket: false,
        }
    }
}

/// Word-cloud list: per document, TF-IDF scores and collocation scores
/// (positive PMI × occurrences in the document) are multiplied by the
/// document weight and summed per term, and per day when bucketing.
pub fn wordcloud_terms(
    corpus: &[Document],
    doc_scores: &[DocumentScore],
    params: &TermParams,
) -> Result<Vec<TermEntry>> {
    let weights: HashMap<&str, f64> = doc_scores
        .iter()
        .map(|s| (s.doc_id.as_str(), s.doc_weight))
        .collect();
    for doc in corpus {
        if !weights.contains_key(doc.id.as_str()) {
            return Err(TermsError::MissingScore(doc.id.clone()));
        }
    }
    let day_of = |doc: &Document| params.day_bucket.then(|| doc.day());
    let mut acc: BTreeMap<(String, TermOrigin, Option<NaiveDate>), f64> = BTreeMap::new();

    let scores = tfidf(corpus, &params.stopwords);
    let by_id: HashMap<&str, &Document> = corpus.iter().map(|d| (d.id.as_str(), d)).collect();
    for ((doc_id, term), score) in &scores {
        let doc = by_id[doc_id.as_str()];
        *acc.entry((term.clone(), TermOrigin::Tfidf, day_of(doc))).or_default() +=
            score * weights[doc_id.as_str()];
    }

    let collocations = bigram_collocations(corpus, params.min_count, params.top_n);
    let pmi: HashMap<&str, f64> = collocations
        .iter()
        .map(|c| (c.bigram.as_str(), c.pmi.max(0.0)))
        .collect();
    if !pmi.is_empty() {
        for doc in corpus {
            let w = weights[doc.id.as_str()];
            for sentence in sentence_norms(doc) {
                for pair in sentence.windows(2) {
                    let bigram = format!("{} {}", pair[0], pair[1]);
                    if let Some(&p) = pmi.get(bigram.as_str()) {
                        *acc.entry((bigram, TermOrigin::Bigram, day_of(doc))).or_default() += p * w;
                    }
                }
            }
        }
    }

    let mut out: Vec<TermEntry> = acc
        .into_iter()
        .map(|((term, origin, day), score)| TermEntry {
            term,
            score,
            day,
            origin,
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.term.cmp(&b.term))
            .then_with(|| a.origin.cmp(&b.origin))
            .then_with(|| a.day.cmp(&b.day))
    });
    Ok(out)
}
