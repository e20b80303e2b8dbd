use std::collections::BTreeMap;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{contains_phrase, reading_grade, split_sentences, Document, Token};

use super::{compound_score, word_sum_score_with, Result, RuleConfig, SentimentError, ValenceLexicon};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub doc_id: String,
    pub index: usize,
    pub word_sum: f64,
    pub compound: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentScore {
    pub doc_id: String,
    pub word_sum_avg: f64,
    pub compound_avg: f64,
    pub doc_weight: f64,
    pub published_at: DateTime<Utc>,
}

impl DocumentScore {
    pub fn day(&self) -> NaiveDate {
        self.published_at.date_naive()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub day: NaiveDate,
    pub avg_word_sum: f64,
    pub avg_compound: f64,
    pub n_docs: usize,
    /// Sum of document weights on this day.
    pub weight: f64,
}

/// Key-term and document weighting settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringOptions {
    pub key_terms: Vec<String>,
    /// Weight for sentences that mention a key term.
    pub kappa: f64,
    /// When off every document gets weight 1.
    pub doc_weighting: bool,
}

impl Default for ScoringOptions {
    fn default() -> Self {
        Self {
            key_terms: crate::default_key_terms(),
            kappa: 2.0,
            doc_weighting: true,
        }
    }
}

/// `kappa` when any key term occurs as a run of normalized tokens, else 1.
pub fn sentence_weight<S: AsRef<str>>(tokens: &[Token], key_terms: &[S], kappa: f64) -> f64 {
    let norms: Vec<&str> = tokens.iter().map(|t| t.norm.as_str()).collect();
    let hit = key_terms.iter().any(|term| {
        let phrase: Vec<String> = term
            .as_ref()
            .split_whitespace()
            .map(str::to_lowercase)
            .collect();
        contains_phrase(&norms, &phrase)
    });
    if hit {
        kappa
    } else {
        1.0
    }
}

/// `2^(tier−1) · clamp(grade / 12, 0.5, 1.5)`.
pub fn document_weight(traffic_tier: u8, grade: f64) -> Result<f64> {
    if !(1..=5).contains(&traffic_tier) {
        return Err(SentimentError::InvalidTier(traffic_tier));
    }
    let reach = f64::from(1u32 << (traffic_tier - 1));
    Ok(reach * (grade / 12.0).clamp(0.5, 1.5))
}

pub fn score_sentences(
    doc: &Document,
    lex: &ValenceLexicon,
    rules: &RuleConfig,
    opts: &ScoringOptions,
) -> Result<Vec<SentenceScore>> {
    Ok(split_sentences(doc)?
        .into_iter()
        .map(|s| SentenceScore {
            word_sum: word_sum_score_with(&s.tokens, lex, rules, rules.word_sum_negation),
            compound: compound_score(&s.tokens, lex, rules),
            weight: sentence_weight(&s.tokens, &opts.key_terms, opts.kappa),
            doc_id: s.doc_id,
            index: s.index,
        })
        .collect())
}

/// Weighted means of the sentence scores.
pub fn aggregate_sentences(
    doc_id: &str,
    published_at: DateTime<Utc>,
    sentences: &[SentenceScore],
    doc_weight: f64,
) -> Result<DocumentScore> {
    if sentences.is_empty() {
        return Err(crate::corpus::CorpusError::EmptyDocument.into());
    }
    let total: f64 = sentences.iter().map(|s| s.weight).sum();
    let word_sum: f64 = sentences.iter().map(|s| s.weight * s.word_sum).sum();
    let compound: f64 = sentences.iter().map(|s| s.weight * s.compound).sum();
    Ok(DocumentScore {
        doc_id: doc_id.to_string(),
        word_sum_avg: word_sum / total,
        compound_avg: compound / total,
        doc_weight,
        published_at,
    })
}

pub fn score_document(
    doc: &Document,
    lex: &ValenceLexicon,
    rules: &RuleConfig,
    opts: &ScoringOptions,
) -> Result<DocumentScore> {
    let sentences = score_sentences(doc, lex, rules, opts)?;
    let weight = if opts.doc_weighting {
        document_weight(doc.traffic_tier, reading_grade(doc)?)?
    } else {
        1.0
    };
    aggregate_sentences(&doc.id, doc.published_at, &sentences, weight)
}

/// Daily `doc_weight`-weighted means over `[from, to]`; empty days are omitted.
pub fn corpus_timeseries(
    scores: &[DocumentScore],
    from: NaiveDate,
    to: NaiveDate,
) -> Result<Vec<TimePoint>> {
    if from > to {
        return Err(SentimentError::InvalidRange);
    }
    #[derive(Default)]
    struct Acc {
        word_sum: f64,
        compound: f64,
        weight: f64,
        n: usize,
    }
    let mut days: BTreeMap<NaiveDate, Acc> = BTreeMap::new();
    for s in scores {
        let day = s.day();
        if day < from || day > to {
            continue;
        }
        let acc = days.entry(day).or_default();
        acc.word_sum += s.doc_weight * s.word_sum_avg;
        acc.compound += s.doc_weight * s.compound_avg;
        acc.weight += s.doc_weight;
        acc.n += 1;
    }
    Ok(days
        .into_iter()
        .map(|(day, a)| TimePoint {
            day,
            avg_word_sum: a.word_sum / a.weight,
            avg_compound: a.compound / a.weight,
            n_docs: a.n,
            weight: a.weight,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub pearson_r: f64,
    /// Share of documents whose two scores have the same sign; a zero
    /// agrees with anything.
    pub sign_agreement: f64,
}

/// Compares the word-sum and compound document averages.
pub fn tool_agreement(scores: &[DocumentScore]) -> Result<Agreement> {
    if scores.len() < 2 {
        return Err(SentimentError::DegenerateInput(
            "need at least two documents".into(),
        ));
    }
    let n = scores.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = scores
        .iter()
        .map(|s| (s.word_sum_avg, s.compound_avg))
        .unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(SentimentError::DegenerateInput("zero variance".into()));
    }
    let agree = xs
        .iter()
        .zip(&ys)
        .filter(|(x, y)| **x == 0.0 || **y == 0.0 || x.signum() == y.signum())
        .count();
    Ok(Agreement {
        pearson_r: (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
        sign_agreement: agree as f64 / n,
    })
}
