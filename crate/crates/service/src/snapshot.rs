//! The pipeline run and the immutable bundle the API serves.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use snapwatch::corpus::{self, CorpusError, InputFormat, RelevanceFilter};
use snapwatch::geo::{self, FeatureCollection, GeoError, HexGrid};
use snapwatch::sentiment::{self, Agreement, SentimentError};
use snapwatch::terms::{self, Stopwords, TermEntry, TermParams, TermsError};
use snapwatch::votes::{self, Bill, Legislator, LegislatorVote, VotesError};
use snapwatch::{Document, DocumentKind, DocumentScore, Geotag, TimePoint, ValenceLexicon};
use thiserror::Error;

use crate::config::{Config, Metric};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("corpus {path}: {source}")]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("lexicon {path}: {source}")]
    Lexicon {
        path: PathBuf,
        source: SentimentError,
    },
    #[error("bills {path}: {source}")]
    Bills { path: PathBuf, source: VotesError },
    #[error("stopwords {path}: {source}")]
    Stopwords { path: PathBuf, source: TermsError },
    #[error("scoring document {doc_id}: {source}")]
    Scoring {
        doc_id: String,
        source: SentimentError,
    },
    #[error("terms: {0}")]
    Terms(#[from] TermsError),
    #[error("hex map: {0}")]
    Geo(#[from] GeoError),
}

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("`from` is after `to`")]
    InvalidRange,
    #[error("unknown legislator {0}")]
    UnknownLegislator(String),
    #[error("hex map: {0}")]
    Geo(#[from] GeoError),
}

/// Document metadata kept in the snapshot (text is dropped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocMeta {
    pub id: String,
    pub kind: DocumentKind,
    pub source: String,
    pub url: Option<String>,
    pub published_at: DateTime<Utc>,
    pub geotag: Option<Geotag>,
    pub traffic_tier: u8,
}

impl From<&Document> for DocMeta {
    fn from(d: &Document) -> Self {
        Self {
            id: d.id.clone(),
            kind: d.kind,
            source: d.source.clone(),
            url: d.url.clone(),
            published_at: d.published_at,
            geotag: d.geotag,
            traffic_tier: d.traffic_tier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub n_ingested: usize,
    pub n_relevant: usize,
    pub n_geotagged: usize,
    pub by_kind: BTreeMap<String, usize>,
    pub by_outlet: BTreeMap<String, usize>,
    pub first_day: Option<NaiveDate>,
    pub last_day: Option<NaiveDate>,
    pub lexicon: String,
    pub metric: Metric,
    pub cell_size: f64,
    pub bbox: geo::BBox,
    pub n_bills: usize,
    pub n_legislators: usize,
    /// Word-sum vs compound agreement; absent below two usable documents.
    pub agreement: Option<Agreement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicWord {
    pub word: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topic {
    pub topic: usize,
    pub words: Vec<TopicWord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub build_timestamp: DateTime<Utc>,
    pub meta: Meta,
    pub documents: Vec<DocMeta>,
    pub doc_scores: Vec<DocumentScore>,
    pub timeseries: Vec<TimePoint>,
    pub grid: HexGrid,
    /// Corpus-wide word-cloud terms.
    pub terms: Vec<TermEntry>,
    /// The same terms bucketed per publication day.
    pub daily_terms: Vec<TermEntry>,
    pub topics: Vec<Topic>,
    pub bills: Vec<Bill>,
}

fn build_timestamp(docs: &[Document]) -> DateTime<Utc> {
    let from_env = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
        .and_then(|s| DateTime::from_timestamp(s, 0));
    from_env
        .or_else(|| docs.iter().map(|d| d.published_at).max())
        .unwrap_or(DateTime::UNIX_EPOCH)
}

fn full_range(scores: &[DocumentScore]) -> Option<(NaiveDate, NaiveDate)> {
    let lo = scores.iter().map(|s| s.day()).min()?;
    let hi = scores.iter().map(|s| s.day()).max()?;
    Some((lo, hi))
}

/// Daily series over the full span of `scores`.
pub fn timeseries_of(scores: &[DocumentScore]) -> Vec<TimePoint> {
    match full_range(scores) {
        Some((lo, hi)) => sentiment::corpus_timeseries(scores, lo, hi).expect("range is ordered"),
        None => Vec::new(),
    }
}

/// Hex map with Gi* classes; with fewer than two data cells the joined
/// cells are returned unclassified (`z` absent) instead of failing.
pub fn lenient_map(bbox: geo::BBox, cell_size: f64, points: &[(Geotag, f64)]) -> Result<HexGrid, GeoError> {
    match geo::hotspot_analysis(bbox, cell_size, points) {
        Err(GeoError::TooFewCells(_)) => {
            Ok(geo::classify_hotspots(geo::spatial_join(geo::make_hex_grid(bbox, cell_size)?, points)))
        }
        other => other,
    }
}

pub fn metric_value(score: &DocumentScore, metric: Metric) -> f64 {
    match metric {
        Metric::Compound => score.compound_avg,
        Metric::WordSum => score.word_sum_avg,
    }
}

/// Scores every relevant document and assembles the snapshot.
pub fn assemble(
    config: &Config,
    ingested: &[Document],
    lexicon: &ValenceLexicon,
    bills: &[Bill],
    stopwords: Stopwords,
) -> Result<Snapshot, BuildError> {
    let filter = RelevanceFilter::new(&config.scoring.key_terms)
        .with_context(&config.ambiguous_terms, &config.context_terms);
    let relevant = filter.apply(ingested);
    log::info!("{} of {} documents are relevant", relevant.len(), ingested.len());

    let doc_scores = relevant
        .iter()
        .map(|d| {
            sentiment::score_document(d, lexicon, &config.rules, &config.scoring).map_err(|source| {
                BuildError::Scoring {
                    doc_id: d.id.clone(),
                    source,
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let timeseries = timeseries_of(&doc_scores);

    let points: Vec<(Geotag, f64)> = relevant
        .iter()
        .zip(&doc_scores)
        .filter_map(|(d, s)| Some((d.geotag?, metric_value(s, config.metric))))
        .collect();
    let grid = lenient_map(config.bbox, config.cell_size, &points)?;

    let mut params = TermParams {
        stopwords,
        min_count: config.min_count,
        top_n: config.top_n,
        day_bucket: false,
    };
    let term_list = terms::wordcloud_terms(&relevant, &doc_scores, &params)?;
    params.day_bucket = true;
    let daily_terms = terms::wordcloud_terms(&relevant, &doc_scores, &params)?;

    let topics = if config.lda.k == 0 || relevant.is_empty() {
        Vec::new()
    } else {
        match terms::lda_fit(&relevant, &params.stopwords, &config.lda) {
            Ok(model) => (0..model.k)
                .map(|t| Topic {
                    topic: t,
                    words: model
                        .top_words(t, 10)
                        .into_iter()
                        .map(|(w, p)| TopicWord {
                            word: w.to_string(),
                            weight: p,
                        })
                        .collect(),
                })
                .collect(),
            Err(TermsError::EmptyCorpus) => {
                log::warn!("no content words for topic modelling");
                Vec::new()
            }
            Err(e) => return Err(e.into()),
        }
    };

    let bills = votes::filter_bills(bills, &config.bill_phrases);
    let mut by_kind = BTreeMap::new();
    let mut by_outlet = BTreeMap::new();
    for d in &relevant {
        *by_kind.entry(d.kind.as_str().to_string()).or_insert(0) += 1;
        *by_outlet.entry(d.source.clone()).or_insert(0) += 1;
    }
    let range = full_range(&doc_scores);
    let meta = Meta {
        n_ingested: ingested.len(),
        n_relevant: relevant.len(),
        n_geotagged: relevant.iter().filter(|d| d.geotag.is_some()).count(),
        by_kind,
        by_outlet,
        first_day: range.map(|r| r.0),
        last_day: range.map(|r| r.1),
        lexicon: lexicon.name.clone(),
        metric: config.metric,
        cell_size: config.cell_size,
        bbox: config.bbox,
        n_bills: bills.len(),
        n_legislators: votes::legislators(&bills).len(),
        agreement: sentiment::tool_agreement(&doc_scores).ok(),
    };
    Ok(Snapshot {
        build_timestamp: build_timestamp(&relevant),
        meta,
        documents: relevant.iter().map(DocMeta::from).collect(),
        doc_scores,
        timeseries,
        grid,
        terms: term_list,
        daily_terms,
        topics,
        bills,
    })
}

/// Loads all inputs and runs the pipeline. Without a bills file the
/// snapshot has no bills.
pub fn build_snapshot(
    config: &Config,
    corpus_path: &Path,
    lexicon_path: &Path,
    bills_path: Option<&Path>,
) -> Result<Snapshot, BuildError> {
    let docs = corpus::load_documents(corpus_path, InputFormat::Jsonl).map_err(|source| BuildError::Corpus {
        path: corpus_path.into(),
        source,
    })?;
    let lexicon = sentiment::load_lexicon(lexicon_path).map_err(|source| BuildError::Lexicon {
        path: lexicon_path.into(),
        source,
    })?;
    let bills = match bills_path {
        Some(p) => votes::load_bills(p).map_err(|source| BuildError::Bills {
            path: p.into(),
            source,
        })?,
        None => Vec::new(),
    };
    let stopwords = load_stopwords(config)?;
    assemble(config, &docs, &lexicon, &bills, stopwords)
}

pub fn load_stopwords(config: &Config) -> Result<Stopwords, BuildError> {
    match &config.stopwords {
        Some(p) => Stopwords::load(p).map_err(|source| BuildError::Stopwords {
            path: p.clone(),
            source,
        }),
        None => Ok(Stopwords::english()),
    }
}

/// Filters applied to the document scores before re-aggregation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreFilter {
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub outlet: Option<String>,
    pub kind: Option<DocumentKind>,
}

impl Snapshot {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        let mut snap: Snapshot = serde_json::from_str(text)?;
        snap.grid.rebuild_index();
        Ok(snap)
    }

    fn select(&self, f: &ScoreFilter) -> Result<Vec<(&DocMeta, &DocumentScore)>, QueryError> {
        if let (Some(a), Some(b)) = (f.from, f.to) {
            if a > b {
                return Err(QueryError::InvalidRange);
            }
        }
        let meta: HashMap<&str, &DocMeta> = self.documents.iter().map(|d| (d.id.as_str(), d)).collect();
        Ok(self
            .doc_scores
            .iter()
            .filter_map(|s| Some((*meta.get(s.doc_id.as_str())?, s)))
            .filter(|(d, s)| {
                f.from.is_none_or(|from| s.day() >= from)
                    && f.to.is_none_or(|to| s.day() <= to)
                    && f.outlet.as_ref().is_none_or(|o| &d.source == o)
                    && f.kind.is_none_or(|k| d.kind == k)
            })
            .collect())
    }

    pub fn timeseries(&self, f: &ScoreFilter) -> Result<Vec<TimePoint>, QueryError> {
        if *f == ScoreFilter::default() {
            return Ok(self.timeseries.clone());
        }
        let scores: Vec<DocumentScore> = self.select(f)?.into_iter().map(|(_, s)| s.clone()).collect();
        Ok(timeseries_of(&scores))
    }

    pub fn map(&self, metric: Metric, f: &ScoreFilter) -> Result<FeatureCollection, QueryError> {
        if metric == self.meta.metric && *f == ScoreFilter::default() {
            return Ok(FeatureCollection::from(&self.grid));
        }
        let points: Vec<(Geotag, f64)> = self
            .select(f)?
            .into_iter()
            .filter_map(|(d, s)| Some((d.geotag?, metric_value(s, metric))))
            .collect();
        let grid = lenient_map(self.meta.bbox, self.meta.cell_size, &points)?;
        Ok(FeatureCollection::from(&grid))
    }

    pub fn terms(&self, day: Option<NaiveDate>, limit: usize) -> Vec<TermEntry> {
        let source = match day {
            None => &self.terms,
            Some(_) => &self.daily_terms,
        };
        source
            .iter()
            .filter(|t| day.is_none() || t.day == day)
            .take(limit)
            .cloned()
            .collect()
    }

    pub fn legislators(&self) -> Vec<Legislator> {
        votes::legislators(&self.bills)
    }

    pub fn legislator_votes(&self, id: &str) -> Result<Vec<LegislatorVote>, QueryError> {
        votes::legislator_record(&self.bills, id).map_err(|e| match e {
            VotesError::UnknownLegislator(id) => QueryError::UnknownLegislator(id),
            other => unreachable!("lookup only fails on unknown ids: {other}"),
        })
    }
}
