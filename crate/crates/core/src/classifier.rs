//! Multinomial Naive Bayes over bags of normalized tokens, for labelled tweets.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{tokenize, Document, Label};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("need labelled examples from at least two classes, found {0}")]
    InsufficientClasses(usize),
    #[error("training documents contain no tokens")]
    EmptyVocabulary,
    #[error("{0}")]
    TooFewExamples(String),
    #[error("smoothing must be positive")]
    InvalidSmoothing,
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ClassifierError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub classes: Vec<Label>,
    pub log_priors: BTreeMap<Label, f64>,
    /// Per class, `ln P(term | class)` for every vocabulary term.
    pub log_likelihoods: BTreeMap<Label, BTreeMap<String, f64>>,
    pub vocab: BTreeSet<String>,
    pub smoothing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    pub posterior: BTreeMap<Label, f64>,
}

fn features(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.norm).collect()
}

/// Trains on the labelled documents in `docs`; unlabelled ones are skipped.
pub fn train(docs: &[Document]) -> Result<NbModel> {
    train_with_smoothing(docs, 1.0)
}

pub fn train_with_smoothing(docs: &[Document], smoothing: f64) -> Result<NbModel> {
    let examples: Vec<(Vec<String>, Label)> = docs
        .iter()
        .filter_map(|d| Some((features(&d.text), d.label?)))
        .collect();
    fit(&examples, smoothing)
}

fn fit(examples: &[(Vec<String>, Label)], smoothing: f64) -> Result<NbModel> {
    if !(smoothing > 0.0) {
        return Err(ClassifierError::InvalidSmoothing);
    }
    let mut doc_counts: BTreeMap<Label, usize> = BTreeMap::new();
    let mut term_counts: BTreeMap<Label, BTreeMap<&str, usize>> = BTreeMap::new();
    let mut vocab = BTreeSet::new();
    for (tokens, label) in examples {
        *doc_counts.entry(*label).or_default() += 1;
        let counts = term_counts.entry(*label).or_default();
        for t in tokens {
            *counts.entry(t.as_str()).or_default() += 1;
            vocab.insert(t.clone());
        }
    }
    if doc_counts.len() < 2 {
        return Err(ClassifierError::InsufficientClasses(doc_counts.len()));
    }
    if vocab.is_empty() {
        return Err(ClassifierError::EmptyVocabulary);
    }
    let n_docs = examples.len() as f64;
    let v = vocab.len() as f64;
    let classes: Vec<Label> = doc_counts.keys().copied().collect();
    let log_priors = doc_counts
        .iter()
        .map(|(&c, &n)| (c, (n as f64 / n_docs).ln()))
        .collect();
    let log_likelihoods = classes
        .iter()
        .map(|c| {
            let counts = &term_counts[c];
            let total: usize = counts.values().sum();
            let denom = total as f64 + smoothing * v;
            let row = vocab
                .iter()
                .map(|w| {
                    let n = counts.get(w.as_str()).copied().unwrap_or(0) as f64;
                    (w.clone(), ((n + smoothing) / denom).ln())
                })
                .collect();
            (*c, row)
        })
        .collect();
    Ok(NbModel {
        classes,
        log_priors,
        log_likelihoods,
        vocab,
        smoothing,
    })
}

impl NbModel {
    pub fn predict_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Prediction {
        let scores: Vec<f64> = self
            .classes
            .iter()
            .map(|c| {
                let lik = &self.log_likelihoods[c];
                self.log_priors[c]
                    + tokens
                        .iter()
                        .filter_map(|t| lik.get(t.as_ref()))
                        .sum::<f64>()
            })
            .collect();
        let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let z: f64 = exp.iter().sum();
        let posterior: BTreeMap<Label, f64> = self
            .classes
            .iter()
            .zip(&exp)
            .map(|(&c, e)| (c, e / z))
            .collect();
        let best = scores
            .iter()
            .enumerate()
            .fold(0, |best, (i, s)| if *s > scores[best] { i } else { best });
        Prediction {
            label: self.classes[best],
            posterior,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), self)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}

/// Most probable label and the normalized posterior. Tokens outside the
/// vocabulary are ignored.
pub fn predict(model: &NbModel, doc: &Document) -> Prediction {
    model.predict_tokens(&features(&doc.text))
}

/// Mean accuracy over `k` stratified folds. Within each class, examples are
/// dealt to folds round-robin in input order, so the split is deterministic.
pub fn cross_validate(docs: &[Document], k: usize) -> Result<f64> {
    if k < 2 {
        return Err(ClassifierError::TooFewExamples(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    let examples: Vec<(Vec<String>, Label)> = docs
        .iter()
        .filter_map(|d| Some((features(&d.text), d.label?)))
        .collect();
    let mut by_class: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for (i, (_, label)) in examples.iter().enumerate() {
        by_class.entry(*label).or_default().push(i);
    }
    if by_class.len() < 2 {
        return Err(ClassifierError::InsufficientClasses(by_class.len()));
    }
    if let Some((label, idx)) = by_class.iter().find(|(_, idx)| idx.len() < k) {
        return Err(ClassifierError::TooFewExamples(format!(
            "class {} has {} examples, fewer than {k} folds",
            label.as_str(),
            idx.len()
        )));
    }
    let mut fold_of = vec![0usize; examples.len()];
    for idx in by_class.values() {
        for (pos, &i) in idx.iter().enumerate() {
            fold_of[i] = pos % k;
        }
    }
    let mut total = 0.0;
    for fold in 0..k {
        let (test, train): (Vec<_>, Vec<_>) = examples
            .iter()
            .zip(&fold_of)
            .partition(|(_, &f)| f == fold);
        let train: Vec<_> = train.into_iter().map(|(e, _)| e.clone()).collect();
        let model = fit(&train, 1.0)?;
        let correct = test
            .iter()
            .filter(|((tokens, label), _)| model.predict_tokens(tokens).label == *label)
            .count();
        total += correct as f64 / test.len() as f64;
    }
    Ok(total / k as f64)
}
