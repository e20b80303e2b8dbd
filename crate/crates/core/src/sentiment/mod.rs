//! Sentence-level sentiment scoring and its aggregation to documents and days.
//!
//! Two scorers run side by side on every sentence:
//!
//! * the *word-sum* score adds integer valences from a [`ValenceLexicon`]
//!   and ignores syntax (negation handling is opt-in);
//! * the *compound* score adjusts each valence with booster, negation,
//!   capitalisation, exclamation and contrastive "but" rules and squashes the
//!   sum into (−1, 1) with `s / sqrt(s² + alpha)`.
//!
//! Sentences that mention a key term get weight κ, documents are weighted by
//! traffic tier and reading grade, and [`corpus_timeseries`] folds documents
//! into daily points.

mod aggregate;
mod lexicon;
mod rules;

use thiserror::Error;

pub use aggregate::{
    aggregate_sentences, corpus_timeseries, document_weight, score_document, score_sentences,
    sentence_weight, tool_agreement, Agreement, DocumentScore, ScoringOptions, SentenceScore,
    TimePoint,
};
pub use lexicon::{load_lexicon, parse_lexicon, ValenceLexicon};
pub use rules::{compound_score, normalize, raw_compound_sum, word_sum_score, word_sum_score_with, RuleConfig};

#[derive(Debug, Error)]
pub enum SentimentError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("score for `{0}` is outside [-5, 5]")]
    OutOfRangeScore(String),
    #[error("term `{0}` appears more than once")]
    DuplicateTerm(String),
    #[error("malformed lexicon line {0}")]
    MalformedLine(usize),
    #[error("invalid rule configuration: {0}")]
    InvalidConfig(String),
    #[error("traffic tier {0} not in 1..5")]
    InvalidTier(u8),
    #[error("date range starts after it ends")]
    InvalidRange,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
}

pub type Result<T, E = SentimentError> = std::result::Result<T, E>;
