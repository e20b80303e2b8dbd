//! Public-opinion analytics for SNAP coverage in news articles and tweets.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! * [`corpus`]: document model, JSON Lines ingestion, relevance filtering,
//!   sentence/word tokenization and Flesch–Kincaid grading.
//! * [`sentiment`]: a valence word-sum scorer and a rule-adjusted compound
//!   scorer, key-term sentence weighting, document weighting and daily
//!   aggregation.
//! * [`classifier`]: multinomial Naive Bayes for labelled tweets.
//! * [`terms`]: TF-IDF, PMI bigram collocations, LDA topics and the weighted
//!   word-cloud list.
//! * [`geo`]: pointy-top hexagonal binning and Getis-Ord Gi* hot/cold spots.
//! * [`votes`]: bill phrase filtering, pruning and per-legislator lookup.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod corpus;
pub mod geo;
pub mod sentiment;
pub mod terms;
pub mod votes;

pub use corpus::{Document, DocumentKind, Geotag, Label, Sentence, Token};
pub use sentiment::{DocumentScore, RuleConfig, SentenceScore, TimePoint, ValenceLexicon};

/// Search terms used to collect the corpus.
pub const DEFAULT_KEY_TERMS: &[&str] = &["snap", "food stamp", "food stamps", "ebt"];

/// Phrases that mark a bill as SNAP-related.
pub const DEFAULT_BILL_PHRASES: &[&str] = &[
    "food stamps",
    "snap",
    "food bank",
    "food desert",
    "hunger",
    "food insecurity",
    "georgia peach card",
];

pub(crate) fn default_key_terms() -> Vec<String> {
    DEFAULT_KEY_TERMS.iter().map(|s| s.to_string()).collect()
}
