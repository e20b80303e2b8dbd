use std::collections::BTreeSet;

use crate::corpus::Token;

use super::{Result, SentimentError, ValenceLexicon};

const BOOSTERS: &[&str] = &[
    "absolutely", "amazingly", "awfully", "completely", "considerably", "decidedly", "deeply",
    "enormously", "entirely", "especially", "exceptionally", "extremely", "fabulously",
    "greatly", "highly", "hugely", "incredibly", "intensely", "majorly", "more", "most",
    "particularly", "purely", "quite", "really", "remarkably", "so", "substantially",
    "thoroughly", "totally", "tremendously", "uber", "unbelievably", "unusually", "utterly",
    "very",
];

const DAMPENERS: &[&str] = &[
    "almost", "barely", "hardly", "less", "little", "marginally", "occasionally", "partly",
    "scarcely", "slightly", "somewhat",
];

const NEGATIONS: &[&str] = &[
    "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "without",
    "cannot", "cant", "dont", "doesnt", "didnt", "isnt", "arent", "wasnt", "werent", "wont",
    "wouldnt", "shouldnt", "couldnt", "aint", "hasnt", "havent", "hadnt", "rarely", "seldom",
];

/// Constants and word lists for the rule-adjusted compound scorer.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleConfig {
    /// Normalisation constant in `s / sqrt(s² + alpha)`.
    pub alpha: f64,
    pub booster_delta: f64,
    pub negation_scalar: f64,
    /// How many preceding tokens a negation cue or booster reaches.
    pub negation_window: usize,
    pub caps_delta: f64,
    pub exclaim_delta: f64,
    pub but_before: f64,
    pub but_after: f64,
    pub booster_terms: BTreeSet<String>,
    pub dampener_terms: BTreeSet<String>,
    pub negation_cues: BTreeSet<String>,
    /// Apply negation to the word-sum scorer as well.
    pub word_sum_negation: bool,
}

fn set(words: &[&str]) -> BTreeSet<String> {
    words.iter().map(|w| w.to_string()).collect()
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            alpha: 15.0,
            booster_delta: 0.293,
            negation_scalar: -0.74,
            negation_window: 3,
            caps_delta: 0.733,
            exclaim_delta: 0.292,
            but_before: 0.5,
            but_after: 1.5,
            booster_terms: set(BOOSTERS),
            dampener_terms: set(DAMPENERS),
            negation_cues: set(NEGATIONS),
            word_sum_negation: false,
        }
    }
}

impl RuleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SentimentError::InvalidConfig(m.to_string()));
        if !(self.alpha > 0.0) {
            return bad("alpha must be positive");
        }
        if !(0.0 < self.but_before && self.but_before < self.but_after) {
            return bad("but weights must satisfy 0 < before < after");
        }
        if self.negation_window < 1 {
            return bad("negation_window must be at least 1");
        }
        Ok(())
    }

    pub fn is_negation(&self, norm: &str) -> bool {
        self.negation_cues.contains(norm) || norm.ends_with("n't")
    }

    fn negated_at(&self, tokens: &[Token], i: usize) -> bool {
        tokens[i.saturating_sub(self.negation_window)..i]
            .iter()
            .any(|t| self.is_negation(&t.norm))
    }
}

/// Sum of lexicon valences; with `negation_mode` a hit within the default
/// window after a negation cue is scaled by the default negation scalar.
pub fn word_sum_score(tokens: &[Token], lex: &ValenceLexicon, negation_mode: bool) -> f64 {
    word_sum_score_with(tokens, lex, &RuleConfig::default(), negation_mode)
}

pub fn word_sum_score_with(
    tokens: &[Token],
    lex: &ValenceLexicon,
    cfg: &RuleConfig,
    negation_mode: bool,
) -> f64 {
    tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| {
            let v = f64::from(lex.get(&t.norm)?);
            Some(if negation_mode && cfg.negated_at(tokens, i) {
                v * cfg.negation_scalar
            } else {
                v
            })
        })
        .sum()
}

/// Unnormalised sum of rule-adjusted valences.
pub fn raw_compound_sum(tokens: &[Token], lex: &ValenceLexicon, cfg: &RuleConfig) -> f64 {
    let has_caps = tokens.iter().any(|t| t.all_caps);
    let has_lower = tokens
        .iter()
        .any(|t| !t.all_caps && t.surface.chars().any(char::is_alphabetic));
    let mixed_case = has_caps && has_lower;

    let mut valences: Vec<f64> = tokens
        .iter()
        .enumerate()
        .map(|(i, tok)| {
            if cfg.booster_terms.contains(&tok.norm) || cfg.dampener_terms.contains(&tok.norm) {
                return 0.0;
            }
            let Some(base) = lex.get(&tok.norm).filter(|&b| b != 0) else {
                return 0.0;
            };
            let mut v = f64::from(base);
            let sign = v.signum();
            for prev in &tokens[i.saturating_sub(cfg.negation_window)..i] {
                if cfg.booster_terms.contains(&prev.norm) {
                    v += sign * cfg.booster_delta;
                } else if cfg.dampener_terms.contains(&prev.norm) {
                    v -= sign * cfg.booster_delta;
                }
            }
            if cfg.negated_at(tokens, i) {
                v *= cfg.negation_scalar;
            }
            let sign = v.signum();
            if mixed_case && tok.all_caps {
                v += sign * cfg.caps_delta;
            }
            v + sign * cfg.exclaim_delta * f64::from(tok.trailing_exclaims)
        })
        .collect();

    if let Some(pivot) = tokens.iter().position(|t| t.norm == "but") {
        for (i, v) in valences.iter_mut().enumerate() {
            if i < pivot {
                *v *= cfg.but_before;
            } else if i > pivot {
                *v *= cfg.but_after;
            }
        }
    }
    valences.iter().sum()
}

/// Maps a raw sum into (−1, 1).
pub fn normalize(sum: f64, alpha: f64) -> f64 {
    sum / (sum * sum + alpha).sqrt()
}

pub fn compound_score(tokens: &[Token], lex: &ValenceLexicon, cfg: &RuleConfig) -> f64 {
    normalize(raw_compound_sum(tokens, lex, cfg), cfg.alpha)
}
