use std::collections::{BTreeMap, HashMap};

use crate::corpus::Document;

use super::{content_tokens, Stopwords};

/// `tf · ln(N / df)` keyed by `(doc_id, term)`, with `tf` the raw count.
pub fn tfidf(corpus: &[Document], stopwords: &Stopwords) -> BTreeMap<(String, String), f64> {
    let docs: Vec<(String, Vec<String>)> = corpus
        .iter()
        .map(|d| (d.id.clone(), content_tokens(d, stopwords)))
        .collect();
    tfidf_tokens(&docs)
}

pub fn tfidf_tokens(docs: &[(String, Vec<String>)]) -> BTreeMap<(String, String), f64> {
    let n = docs.len() as f64;
    let counts: Vec<HashMap<&str, usize>> = docs
        .iter()
        .map(|(_, toks)| {
            let mut c = HashMap::new();
            for t in toks {
                *c.entry(t.as_str()).or_insert(0) += 1;
            }
            c
        })
        .collect();
    let mut df: HashMap<&str, usize> = HashMap::new();
    for c in &counts {
        for term in c.keys() {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let mut out = BTreeMap::new();
    for ((id, _), c) in docs.iter().zip(&counts) {
        for (term, &tf) in c {
            let idf = (n / df[term] as f64).ln();
            out.insert((id.clone(), term.to_string()), tf as f64 * idf);
        }
    }
    out
}
