use serde::{Deserialize, Serialize};

use super::{CorpusError, Document, Result};

/// Abbreviations whose trailing period never ends a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "dr.", "mr.", "mrs.", "ms.", "st.", "u.s.", "sen.", "rep.", "vs.", "etc.", "jr.", "sr.",
    "gov.", "prof.", "gen.", "lt.", "col.", "inc.", "corp.", "co.", "no.", "e.g.", "i.e.",
    "u.s.a.", "jan.", "feb.", "aug.", "sept.", "oct.", "nov.", "dec.",
];

const MAX_EXCLAIMS: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Lowercased with leading and trailing punctuation removed.
    pub norm: String,
    pub all_caps: bool,
    pub trailing_exclaims: u8,
}

impl Token {
    pub fn new(surface: &str) -> Option<Token> {
        let norm = surface
            .trim_matches(|c: char| !c.is_alphanumeric())
            .to_lowercase()
            .trim_matches(|c: char| !c.is_alphanumeric())
            .to_string();
        if norm.is_empty() {
            return None;
        }
        let mut n_letters = 0;
        let mut upper = true;
        for c in surface.chars().filter(|c| c.is_alphabetic()) {
            n_letters += 1;
            upper &= c.is_uppercase();
        }
        let suffix_start = surface
            .rfind(|c: char| c.is_alphanumeric())
            .map(|i| i + surface[i..].chars().next().map_or(1, char::len_utf8))
            .unwrap_or(0);
        let exclaims = surface[suffix_start..].chars().filter(|&c| c == '!').count();
        Some(Token {
            surface: surface.to_string(),
            norm,
            all_caps: n_letters >= 2 && upper,
            trailing_exclaims: exclaims.min(MAX_EXCLAIMS as usize) as u8,
        })
    }
}

/// Splits on whitespace; punctuation-only words are dropped.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split_whitespace().filter_map(Token::new).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub index: usize,
    pub tokens: Vec<Token>,
    pub raw: String,
}

pub fn split_sentences(doc: &Document) -> Result<Vec<Sentence>> {
    let sentences = split_text(&doc.text)?;
    Ok(sentences
        .into_iter()
        .enumerate()
        .map(|(index, (raw, tokens))| Sentence {
            doc_id: doc.id.clone(),
            index,
            tokens,
            raw,
        })
        .collect())
}

fn is_delimiter(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

/// Rule-based sentence splitter returning `(raw, tokens)` pairs.
///
/// A run of `.`, `!` or `?` (plus closing quotes) ends a sentence when it is
/// followed by whitespace and an uppercase letter, or by the end of the text.
/// Segments without any word are folded into a neighbour so every sentence
/// carries at least one token.
pub fn split_text(text: &str) -> Result<Vec<(String, Vec<Token>)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut ranges: Vec<(usize, usize)> = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        if !is_delimiter(chars[i].1) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && is_delimiter(chars[j].1) {
            j += 1;
        }
        let single_period = j == i + 1 && chars[i].1 == '.';
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let mut boundary = k == chars.len()
            || (k > j && {
                let mut m = k;
                while m < chars.len() && is_opener(chars[m].1) {
                    m += 1;
                }
                m < chars.len() && chars[m].1.is_uppercase()
            });
        if boundary && single_period && is_abbreviation(text, byte_at(i), byte_at(i + 1)) {
            boundary = false;
        }
        if boundary {
            ranges.push((start, byte_at(j)));
            start = byte_at(k);
            i = k;
        } else {
            i = j;
        }
    }
    if start < text.len() {
        ranges.push((start, text.len()));
    }

    let mut out: Vec<(usize, usize)> = Vec::new();
    let mut pending: Option<usize> = None;
    for (s, e) in ranges {
        let s = pending.take().unwrap_or(s);
        if tokenize(&text[s..e]).is_empty() {
            match out.last_mut() {
                Some(last) => last.1 = e,
                None => pending = Some(s),
            }
        } else {
            out.push((s, e));
        }
    }
    if out.is_empty() {
        return Err(CorpusError::EmptyDocument);
    }
    Ok(out
        .into_iter()
        .map(|(s, e)| {
            let raw = text[s..e].trim().to_string();
            let tokens = tokenize(&raw);
            (raw, tokens)
        })
        .collect())
}

/// `dot_end` is the byte offset just past the period at `dot`.
fn is_abbreviation(text: &str, dot: usize, dot_end: usize) -> bool {
    let word_start = text[..dot]
        .rfind(char::is_whitespace)
        .map_or(0, |i| i + text[i..].chars().next().map_or(1, char::len_utf8));
    let word = text[word_start..dot_end].trim_start_matches(is_opener);
    let lower = word.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}
