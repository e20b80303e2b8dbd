//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use snapwatch::corpus::{self, RelevanceFilter};
use snapwatch::geo::{self, axial_distance, axial_to_point, BBox, FeatureCollection};
use snapwatch::sentiment::{self, ScoringOptions, ValenceLexicon};
use snapwatch::{Document, DocumentKind, Geotag, RuleConfig, DEFAULT_KEY_TERMS};
use wasm_bindgen::prelude::*;

const LEXICON: &str = include_str!("../../service/data/valence.tsv");

fn lexicon() -> ValenceLexicon {
    sentiment::parse_lexicon("valence", LEXICON.as_bytes()).expect("bundled lexicon parses")
}

fn error_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(error_json)
}

#[derive(Serialize)]
struct SentenceView {
    text: String,
    word_sum: f64,
    compound: f64,
    weight: f64,
}

#[derive(Serialize)]
struct TextScore {
    relevant: bool,
    reading_grade: f64,
    doc_weight: f64,
    word_sum_avg: f64,
    compound_avg: f64,
    sentences: Vec<SentenceView>,
}

fn as_document(text: &str, traffic_tier: u8) -> Document {
    Document {
        id: "input".into(),
        kind: DocumentKind::Article,
        text: text.into(),
        source: "demo".into(),
        url: None,
        published_at: chrono::DateTime::UNIX_EPOCH,
        geotag: None,
        traffic_tier,
        label: None,
    }
}

/// Scores `text` sentence by sentence with the bundled lexicon and default
/// rules. `traffic_tier` (1..5) feeds the document weight.
#[wasm_bindgen]
pub fn score_text(text: &str, traffic_tier: u8) -> String {
    let doc = as_document(text, traffic_tier);
    if let Err(e) = doc.validate() {
        return error_json(e);
    }
    let lex = lexicon();
    let rules = RuleConfig::default();
    let opts = ScoringOptions::default();
    let run = || -> Result<TextScore, sentiment::SentimentError> {
        let sentences = corpus::split_sentences(&doc)?;
        let scores = sentiment::score_sentences(&doc, &lex, &rules, &opts)?;
        let total = sentiment::score_document(&doc, &lex, &rules, &opts)?;
        Ok(TextScore {
            relevant: RelevanceFilter::new(DEFAULT_KEY_TERMS).is_relevant(&doc),
            reading_grade: corpus::reading_grade(&doc)?,
            doc_weight: total.doc_weight,
            word_sum_avg: total.word_sum_avg,
            compound_avg: total.compound_avg,
            sentences: sentences
                .into_iter()
                .zip(scores)
                .map(|(s, sc)| SentenceView {
                    text: s.raw,
                    word_sum: sc.word_sum,
                    compound: sc.compound,
                    weight: sc.weight,
                })
                .collect(),
        })
    };
    match run() {
        Ok(score) => to_json(&score),
        Err(e) => error_json(e),
    }
}

/// Simulates a hex field of the given `radius` (in cells) with N(0, noise)
/// values and a three-cell block set to `cluster_value`, then runs Gi*.
/// Returns the classified grid as a GeoJSON FeatureCollection.
#[wasm_bindgen]
pub fn hotspot_demo(seed: u32, radius: u32, noise: f64, cluster_value: f64) -> String {
    let radius = radius.clamp(2, 12) as i32;
    let noise = match Normal::new(0.0, noise.abs()) {
        Ok(n) => n,
        Err(e) => return error_json(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let block = [(0, 0), (1, 0), (0, 1)];
    let mut points = Vec::new();
    for q in -radius..=radius {
        for r in -radius..=radius {
            if axial_distance((q, r), (0, 0)) > radius {
                continue;
            }
            let value = if block.contains(&(q, r)) {
                cluster_value
            } else {
                noise.sample(&mut rng)
            };
            let (lon, lat) = axial_to_point(q, r, 1.0);
            points.push((Geotag { lat, lon }, value));
        }
    }
    let extent = 2.0 * radius as f64 + 1.0;
    let bbox = BBox::new(-extent, -extent, extent, extent);
    match geo::hotspot_analysis(bbox, 1.0, &points) {
        Ok(mut grid) => {
            grid.cells.retain(|c| c.count > 0);
            to_json(&FeatureCollection::from(&grid))
        }
        Err(e) => error_json(e),
    }
}

/// Whether `text` passes the default relevance filter.
#[wasm_bindgen]
pub fn is_relevant(text: &str) -> bool {
    RelevanceFilter::new(DEFAULT_KEY_TERMS).is_relevant(&as_document(text, 1))
}
