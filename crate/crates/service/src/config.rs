//! Plain-text pipeline configuration: one `key = value` per line, `#`
//! comments, comma-separated lists. Keys that are absent keep their defaults.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use snapwatch::corpus::DEFAULT_CONTEXT_TERMS;
use snapwatch::geo::BBox;
use snapwatch::sentiment::ScoringOptions;
use snapwatch::terms::LdaParams;
use snapwatch::{RuleConfig, DEFAULT_BILL_PHRASES};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Which document score feeds the hex map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Compound,
    WordSum,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Compound => "compound",
            Metric::WordSum => "word_sum",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "compound" => Ok(Metric::Compound),
            "word_sum" => Ok(Metric::WordSum),
            _ => Err(format!("expected compound or word_sum, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub rules: RuleConfig,
    pub scoring: ScoringOptions,
    pub ambiguous_terms: Vec<String>,
    pub context_terms: Vec<String>,
    pub bbox: BBox,
    pub cell_size: f64,
    pub metric: Metric,
    pub min_count: usize,
    pub top_n: usize,
    pub day_bucket: bool,
    pub stopwords: Option<PathBuf>,
    /// `lda.k == 0` skips topic modelling.
    pub lda: LdaParams,
    pub bill_phrases: Vec<String>,
    pub cors_origin: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            rules: RuleConfig::default(),
            scoring: ScoringOptions::default(),
            ambiguous_terms: vec!["snap".into()],
            context_terms: DEFAULT_CONTEXT_TERMS.iter().map(|s| s.to_string()).collect(),
            bbox: BBox::conus(),
            cell_size: 1.0,
            metric: Metric::Compound,
            min_count: 3,
            top_n: 50,
            day_bucket: false,
            stopwords: None,
            lda: LdaParams::default(),
            bill_phrases: DEFAULT_BILL_PHRASES.iter().map(|s| s.to_string()).collect(),
            cors_origin: None,
        }
    }
}

fn list(v: &str) -> Vec<String> {
    v.split(',')
        .map(|s| s.trim().to_lowercase())
        .filter(|s| !s.is_empty())
        .collect()
}

fn set(v: &str) -> BTreeSet<String> {
    list(v).into_iter().collect()
}

fn boolean(v: &str) -> Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("expected a boolean, got `{v}`")),
    }
}

fn num<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("`{v}`: {e}"))
}

impl Config {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax(line))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.into(),
                });
            }
            cfg.set(key, value).map_err(|e| match e {
                None => ConfigError::UnknownKey {
                    line,
                    key: key.into(),
                },
                Some(reason) => ConfigError::BadValue {
                    line,
                    key: key.into(),
                    reason,
                },
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// `Err(None)` for an unknown key.
    fn set(&mut self, key: &str, v: &str) -> Result<(), Option<String>> {
        let r = &mut self.rules;
        match key {
            "alpha" => r.alpha = num(v)?,
            "booster_delta" => r.booster_delta = num(v)?,
            "negation_scalar" => r.negation_scalar = num(v)?,
            "negation_window" => r.negation_window = num(v)?,
            "caps_delta" => r.caps_delta = num(v)?,
            "exclaim_delta" => r.exclaim_delta = num(v)?,
            "but_before" => r.but_before = num(v)?,
            "but_after" => r.but_after = num(v)?,
            "booster_terms" => r.booster_terms = set(v),
            "dampener_terms" => r.dampener_terms = set(v),
            "negation_cues" => r.negation_cues = set(v),
            "word_sum_negation" => r.word_sum_negation = boolean(v)?,
            "key_terms" => self.scoring.key_terms = list(v),
            "kappa" => self.scoring.kappa = num(v)?,
            "doc_weighting" => self.scoring.doc_weighting = boolean(v)?,
            "ambiguous_terms" => self.ambiguous_terms = list(v),
            "context_terms" => self.context_terms = list(v),
            "bbox" => {
                let parts = v
                    .split(',')
                    .map(|p| num::<f64>(p.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                let [a, b, c, d] = parts[..] else {
                    return Err(Some("expected min_lon, min_lat, max_lon, max_lat".into()));
                };
                self.bbox = BBox::new(a, b, c, d);
            }
            "cell_size" => self.cell_size = num(v)?,
            "metric" => self.metric = v.parse()?,
            "min_count" => self.min_count = num(v)?,
            "top_n" => self.top_n = num(v)?,
            "day_bucket" => self.day_bucket = boolean(v)?,
            "stopwords" => self.stopwords = Some(PathBuf::from(v)),
            "lda_topics" => self.lda.k = num(v)?,
            "lda_iterations" => self.lda.iterations = num(v)?,
            "lda_alpha" => self.lda.alpha = Some(num(v)?),
            "lda_beta" => self.lda.beta = num(v)?,
            "lda_seed" => self.lda.seed = num(v)?,
            "bill_phrases" => self.bill_phrases = list(v),
            "cors_origin" => self.cors_origin = Some(v.to_string()),
            _ => return Err(None),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        self.rules
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.scoring.key_terms.is_empty() {
            return bad("key_terms must not be empty");
        }
        if !(self.scoring.kappa > 0.0) {
            return bad("kappa must be positive");
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return bad("cell_size must be positive");
        }
        if self.bbox.is_degenerate() {
            return bad("bbox is empty or inverted");
        }
        if !(self.lda.beta > 0.0) || self.lda.alpha.is_some_and(|a| !(a > 0.0)) {
            return bad("LDA priors must be positive");
        }
        if self.min_count == 0 {
            return bad("min_count must be at least 1");
        }
        Ok(())
    }
}
