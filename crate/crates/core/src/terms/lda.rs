//! Latent Dirichlet Allocation fitted with a collapsed Gibbs sampler.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;

use super::{content_tokens, Result, Stopwords, TermsError};

#[derive(Debug, Clone, PartialEq)]
pub struct LdaParams {
    pub k: usize,
    pub iterations: usize,
    /// Document-topic prior; `None` means `50 / k`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub seed: u64,
}

impl Default for LdaParams {
    fn default() -> Self {
        Self {
            k: 10,
            iterations: 500,
            alpha: None,
            beta: 0.01,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub k: usize,
    pub vocab: Vec<String>,
    pub doc_ids: Vec<String>,
    /// `k × |vocab|` topic-word probabilities.
    pub phi: Vec<Vec<f64>>,
    /// `|docs| × k` document-topic probabilities.
    pub theta: Vec<Vec<f64>>,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
}

impl TopicModel {
    /// The `n` most probable words of `topic`, ties broken alphabetically.
    pub fn top_words(&self, topic: usize, n: usize) -> Vec<(&str, f64)> {
        let mut words: Vec<(&str, f64)> = self
            .vocab
            .iter()
            .map(String::as_str)
            .zip(self.phi[topic].iter().copied())
            .collect();
        words.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        words.truncate(n);
        words
    }
}

pub fn lda_fit(corpus: &[Document], stopwords: &Stopwords, params: &LdaParams) -> Result<TopicModel> {
    let docs: Vec<(String, Vec<String>)> = corpus
        .iter()
        .map(|d| (d.id.clone(), content_tokens(d, stopwords)))
        .collect();
    lda_fit_tokens(&docs, params)
}

pub fn lda_fit_tokens(docs: &[(String, Vec<String>)], params: &LdaParams) -> Result<TopicModel> {
    let k = params.k;
    if k == 0 {
        return Err(TermsError::InvalidParams("k must be at least 1".into()));
    }
    if !(params.beta > 0.0) || params.alpha.is_some_and(|a| !(a > 0.0)) {
        return Err(TermsError::InvalidParams("Dirichlet priors must be positive".into()));
    }
    let alpha = params.alpha.unwrap_or(50.0 / k as f64);
    let beta = params.beta;

    let mut index: BTreeMap<&str, usize> = docs
        .iter()
        .flat_map(|(_, toks)| toks.iter().map(String::as_str))
        .map(|t| (t, 0))
        .collect();
    if index.is_empty() {
        return Err(TermsError::EmptyCorpus);
    }
    for (i, id) in index.values_mut().enumerate() {
        *id = i;
    }
    let vocab: Vec<String> = index.keys().map(|s| s.to_string()).collect();
    let v = vocab.len();
    let words: Vec<Vec<usize>> = docs
        .iter()
        .map(|(_, toks)| toks.iter().map(|t| index[t.as_str()]).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut doc_topic = vec![vec![0usize; k]; docs.len()];
    let mut topic_word = vec![vec![0usize; v]; k];
    let mut topic_total = vec![0usize; k];
    let mut assignment: Vec<Vec<usize>> = words
        .iter()
        .enumerate()
        .map(|(d, ws)| {
            ws.iter()
                .map(|&w| {
                    let z = rng.random_range(0..k);
                    doc_topic[d][z] += 1;
                    topic_word[z][w] += 1;
                    topic_total[z] += 1;
                    z
                })
                .collect()
        })
        .collect();

    let v_beta = v as f64 * beta;
    let mut cumulative = vec![0.0f64; k];
    for _ in 0..params.iterations {
        for (d, ws) in words.iter().enumerate() {
            for (i, &w) in ws.iter().enumerate() {
                let old = assignment[d][i];
                doc_topic[d][old] -= 1;
                topic_word[old][w] -= 1;
                topic_total[old] -= 1;

                let mut acc = 0.0;
                for t in 0..k {
                    acc += (doc_topic[d][t] as f64 + alpha) * (topic_word[t][w] as f64 + beta)
                        / (topic_total[t] as f64 + v_beta);
                    cumulative[t] = acc;
                }
                let u = rng.random::<f64>() * acc;
                let new = cumulative.iter().position(|&c| u < c).unwrap_or(k - 1);

                assignment[d][i] = new;
                doc_topic[d][new] += 1;
                topic_word[new][w] += 1;
                topic_total[new] += 1;
            }
        }
    }

    let phi = (0..k)
        .map(|t| {
            (0..v)
                .map(|w| (topic_word[t][w] as f64 + beta) / (topic_total[t] as f64 + v as f64 * beta))
                .collect()
        })
        .collect();
    let theta = words
        .iter()
        .enumerate()
        .map(|(d, ws)| {
            (0..k)
                .map(|t| (doc_topic[d][t] as f64 + alpha) / (ws.len() as f64 + k as f64 * alpha))
                .collect()
        })
        .collect();
    Ok(TopicModel {
        k,
        vocab,
        doc_ids: docs.iter().map(|(id, _)| id.clone()).collect(),
        phi,
        theta,
        alpha,
        beta,
        seed: params.seed,
        iterations: params.iterations,
    })
}
