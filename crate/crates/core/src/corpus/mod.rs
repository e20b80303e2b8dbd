//! Documents, ingestion and relevance filtering.

mod readability;
mod tokenize;

use std::collections::{BTreeSet, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use readability::{count_syllables, reading_grade, readability, Readability};
pub use tokenize::{split_sentences, split_text, tokenize, Sentence, Token, ABBREVIATIONS};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("document has no sentences")]
    EmptyDocument,
}

pub type Result<T, E = CorpusError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Article,
    Tweet,
}

impl DocumentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DocumentKind::Article => "article",
            DocumentKind::Tweet => "tweet",
        }
    }
}

impl std::str::FromStr for DocumentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "article" => Ok(DocumentKind::Article),
            "tweet" => Ok(DocumentKind::Tweet),
            other => Err(format!("unknown document kind `{other}`")),
        }
    }
}

/// Nominal sentiment label attached to training tweets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
    Neutral,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Positive, Label::Negative, Label::Neutral];

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
            Label::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geotag {
    pub lat: f64,
    pub lon: f64,
}

impl Geotag {
    pub fn is_valid(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat) && (-180.0..=180.0).contains(&self.lon)
    }
}

/// One news article or tweet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub kind: DocumentKind,
    pub text: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    pub published_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geotag: Option<Geotag>,
    /// Ordinal audience size of the publishing site, 1 (smallest) to 5.
    pub traffic_tier: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

const DOCUMENT_FIELDS: &[&str] = &[
    "id",
    "kind",
    "text",
    "source",
    "url",
    "published_at",
    "geotag",
    "traffic_tier",
    "label",
];

impl Document {
    /// Checks the per-document invariants, returning the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("id is empty".into());
        }
        if self.text.trim().is_empty() {
            return Err("text is empty".into());
        }
        if let Some(g) = &self.geotag {
            if !g.is_valid() {
                return Err(format!("geotag ({}, {}) out of range", g.lat, g.lon));
            }
        }
        if !(1..=5).contains(&self.traffic_tier) {
            return Err(format!("traffic_tier {} not in 1..5", self.traffic_tier));
        }
        Ok(())
    }

    pub fn day(&self) -> chrono::NaiveDate {
        self.published_at.date_naive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Jsonl,
}

/// Result of reading a document stream.
#[derive(Debug, Clone, Default)]
pub struct Ingest {
    pub documents: Vec<Document>,
    /// `(line, field)` for every field not part of the document schema.
    pub unknown_fields: Vec<(usize, String)>,
}

/// Loads a corpus file, preserving line order.
pub fn load_documents(path: impl AsRef<Path>, format: InputFormat) -> Result<Vec<Document>> {
    let file = File::open(path)?;
    let ingest = match format {
        InputFormat::Jsonl => read_documents(BufReader::new(file))?,
    };
    for (line, field) in &ingest.unknown_fields {
        log::warn!("line {line}: ignoring unknown field `{field}`");
    }
    Ok(ingest.documents)
}

/// Parses JSON Lines from `reader`. Blank lines are skipped.
pub fn read_documents<R: BufRead>(reader: R) -> Result<Ingest> {
    let mut ingest = Ingest::default();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| CorpusError::MalformedRecord {
            line: line_no,
            reason,
        };
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| malformed("expected a JSON object".into()))?;
        for key in obj.keys() {
            if !DOCUMENT_FIELDS.contains(&key.as_str()) {
                ingest.unknown_fields.push((line_no, key.clone()));
            }
        }
        let doc: Document = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        doc.validate().map_err(malformed)?;
        if !seen.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId(doc.id));
        }
        ingest.documents.push(doc);
    }
    Ok(ingest)
}

pub fn write_documents<W: Write>(mut writer: W, docs: &[Document]) -> io::Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut writer, doc)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Keyword relevance filter.
///
/// Multi-word terms match as consecutive normalized tokens and single-word
/// terms as whole tokens. Terms listed in `ambiguous` only count when one of
/// `context` also appears somewhere in the document.
#[derive(Debug, Clone)]
pub struct RelevanceFilter {
    key_terms: Vec<Vec<String>>,
    ambiguous: BTreeSet<String>,
    context: BTreeSet<String>,
}

pub const DEFAULT_CONTEXT_TERMS: &[&str] = &[
    "food", "stamp", "stamps", "benefit", "benefits", "ebt", "hunger", "usda",
];

impl RelevanceFilter {
    pub fn new<S: AsRef<str>>(key_terms: &[S]) -> Self {
        Self {
            key_terms: key_terms
                .iter()
                .map(|t| t.as_ref().split_whitespace().map(str::to_lowercase).collect())
                .filter(|t: &Vec<String>| !t.is_empty())
                .collect(),
            ambiguous: BTreeSet::from(["snap".to_string()]),
            context: DEFAULT_CONTEXT_TERMS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn with_context<S: AsRef<str>>(mut self, ambiguous: &[S], context: &[S]) -> Self {
        self.ambiguous = ambiguous.iter().map(|s| s.as_ref().to_lowercase()).collect();
        self.context = context.iter().map(|s| s.as_ref().to_lowercase()).collect();
        self
    }

    pub fn is_relevant(&self, doc: &Document) -> bool {
        let norms: Vec<String> = tokenize(&doc.text).into_iter().map(|t| t.norm).collect();
        let has_context = || norms.iter().any(|n| self.context.contains(n));
        self.key_terms.iter().any(|term| {
            if !contains_phrase(&norms, term) {
                return false;
            }
            if term.len() == 1 && self.ambiguous.contains(&term[0]) {
                has_context()
            } else {
                true
            }
        })
    }

    pub fn apply(&self, docs: &[Document]) -> Vec<Document> {
        docs.iter().filter(|d| self.is_relevant(d)).cloned().collect()
    }
}

/// Keeps documents that mention any of `key_terms`, with the default
/// disambiguation for "snap".
pub fn filter_relevant<S: AsRef<str>>(docs: &[Document], key_terms: &[S]) -> Vec<Document> {
    RelevanceFilter::new(key_terms).apply(docs)
}

pub(crate) fn contains_phrase<S: AsRef<str>>(norms: &[S], phrase: &[String]) -> bool {
    if phrase.is_empty() || norms.len() < phrase.len() {
        return false;
    }
    norms
        .windows(phrase.len())
        .any(|w| w.iter().zip(phrase).all(|(a, b)| a.as_ref() == b))
}


#[cfg(test)]
mod tests {
    use super::test_support::doc;
    use super::*;

    const FULL: &str = r#"{"id":"a1","kind":"article","text":"Food stamps matter.","source":"Daily","url":"https://example.com/a1","published_at":"2017-05-23T10:00:00Z","geotag":{"lat":33.7,"lon":-84.4},"traffic_tier":3}"#;

    #[test]
    fn loads_one_full_record() {
        let ingest = read_documents(FULL.as_bytes()).unwrap();
        assert_eq!(ingest.documents.len(), 1);
        let d = &ingest.documents[0];
        assert_eq!(d.id, "a1");
        assert_eq!(d.traffic_tier, 3);
        assert_eq!(d.geotag, Some(Geotag { lat: 33.7, lon: -84.4 }));
        assert!(ingest.unknown_fields.is_empty());
    }

    #[test]
    fn geotag_is_optional() {
        let line = r#"{"id":"t1","kind":"tweet","text":"my EBT card","source":"@x","published_at":"2017-05-23T10:00:00+02:00","traffic_tier":1,"label":"negative"}"#;
        let d = &read_documents(line.as_bytes()).unwrap().documents[0];
        assert!(d.geotag.is_none());
        assert_eq!(d.label, Some(Label::Negative));
        assert_eq!(d.published_at.to_rfc3339(), "2017-05-23T08:00:00+00:00");
    }

    #[test]
    fn tier_out_of_range_is_malformed() {
        let line = FULL.replace("\"traffic_tier\":3", "\"traffic_tier\":9");
        let input = format!("{FULL}\n{}", line.replace("a1", "a2"));
        match read_documents(input.as_bytes()) {
            Err(CorpusError::MalformedRecord { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_json_and_bad_geotag_are_malformed() {
        assert!(matches!(
            read_documents("{not json".as_bytes()),
            Err(CorpusError::MalformedRecord { line: 1, .. })
        ));
        let bad = FULL.replace("33.7", "133.7");
        assert!(matches!(
            read_documents(bad.as_bytes()),
            Err(CorpusError::MalformedRecord { .. })
        ));
        let blank = FULL.replace("Food stamps matter.", "   ");
        assert!(matches!(
            read_documents(blank.as_bytes()),
            Err(CorpusError::MalformedRecord { .. })
        ));
        let naive = FULL.replace("2017-05-23T10:00:00Z", "2017-05-23T10:00:00");
        assert!(matches!(
            read_documents(naive.as_bytes()),
            Err(CorpusError::MalformedRecord { .. })
        ));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let input = format!("{FULL}\n\n{FULL}\n");
        assert!(matches!(
            read_documents(input.as_bytes()),
            Err(CorpusError::DuplicateId(id)) if id == "a1"
        ));
    }

    #[test]
    fn unknown_fields_are_reported() {
        let line = FULL.replace("\"traffic_tier\"", "\"lang\":\"en\",\"traffic_tier\"");
        let ingest = read_documents(line.as_bytes()).unwrap();
        assert_eq!(ingest.unknown_fields, vec![(1, "lang".to_string())]);
    }

    #[test]
    fn relevance_examples() {
        let docs = vec![
            doc("1", "Food stamps should be expanded"),
            doc("2", "snap out of it"),
            doc("3", "My EBT card was declined"),
            doc("4", "SNAP benefits were cut"),
            doc("5", "A celebration of debt relief"),
            doc("6", "Her food stamp ran out"),
        ];
        let kept: Vec<_> = filter_relevant(&docs, crate::DEFAULT_KEY_TERMS)
            .into_iter()
            .map(|d| d.id)
            .collect();
        assert_eq!(kept, vec!["1", "3", "4", "6"]);
    }

    #[test]
    fn filter_is_idempotent_subset() {
        let docs = vec![
            doc("1", "Food stamps should be expanded"),
            doc("2", "snap decision"),
            doc("3", "usda says SNAP grew"),
        ];
        let once = filter_relevant(&docs, crate::DEFAULT_KEY_TERMS);
        let twice = filter_relevant(&once, crate::DEFAULT_KEY_TERMS);
        assert_eq!(once, twice);
        assert!(once.iter().all(|d| docs.contains(d)));
    }
}
