use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;

use super::sentence_norms;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collocation {
    /// Space-joined pair of normalized tokens.
    pub bigram: String,
    pub pmi: f64,
    pub count: usize,
}

/// Adjacent token pairs within sentences, ranked by
/// `ln(p(ab) / (p(a) p(b)))`, then by count, then lexicographically.
pub fn bigram_collocations(corpus: &[Document], min_count: usize, top_n: usize) -> Vec<Collocation> {
    let sentences: Vec<Vec<String>> = corpus.iter().flat_map(sentence_norms).collect();
    collocations_from_sentences(&sentences, min_count, top_n)
}

pub fn collocations_from_sentences<S: AsRef<str>>(
    sentences: &[Vec<S>],
    min_count: usize,
    top_n: usize,
) -> Vec<Collocation> {
    let min_count = min_count.max(1);
    let mut unigrams: HashMap<&str, usize> = HashMap::new();
    let mut bigrams: HashMap<(&str, &str), usize> = HashMap::new();
    let (mut n_uni, mut n_bi) = (0usize, 0usize);
    for s in sentences {
        for t in s {
            *unigrams.entry(t.as_ref()).or_default() += 1;
            n_uni += 1;
        }
        for w in s.windows(2) {
            *bigrams.entry((w[0].as_ref(), w[1].as_ref())).or_default() += 1;
            n_bi += 1;
        }
    }
    let mut out: Vec<Collocation> = bigrams
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .map(|((a, b), c)| {
            let p_ab = c as f64 / n_bi as f64;
            let p_a = unigrams[a] as f64 / n_uni as f64;
            let p_b = unigrams[b] as f64 / n_uni as f64;
            Collocation {
                bigram: format!("{a} {b}"),
                pmi: (p_ab / (p_a * p_b)).ln(),
                count: c,
            }
        })
        .collect();
    out.sort_by(|x, y| {
        y.pmi
            .total_cmp(&x.pmi)
            .then(y.count.cmp(&x.count))
            .then_with(|| x.bigram.cmp(&y.bigram))
    });
    out.truncate(top_n);
    out
}
