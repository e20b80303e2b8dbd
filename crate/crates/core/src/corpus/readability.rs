//! Flesch–Kincaid grade level with a vowel-group syllable heuristic.

use super::{split_text, Document, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readability {
    pub sentences: usize,
    pub words: usize,
    pub syllables: usize,
    pub grade: f64,
}

/// Counts vowel groups (`y` included), drops a trailing silent `e`, and
/// never returns less than one.
pub fn count_syllables(word: &str) -> usize {
    let chars: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    let n = chars.len();
    if groups > 1 && n >= 2 && chars[n - 1] == 'e' && !is_vowel(chars[n - 2]) {
        groups -= 1;
    }
    groups.max(1)
}

pub fn readability(text: &str) -> Result<Readability> {
    let sentences = split_text(text)?;
    let words: usize = sentences.iter().map(|(_, t)| t.len()).sum();
    let syllables: usize = sentences
        .iter()
        .flat_map(|(_, t)| t.iter())
        .map(|t| count_syllables(&t.norm))
        .sum();
    let n_sent = sentences.len() as f64;
    let n_words = words as f64;
    let grade = 0.39 * (n_words / n_sent) + 11.8 * (syllables as f64 / n_words) - 15.59;
    Ok(Readability {
        sentences: sentences.len(),
        words,
        syllables,
        grade,
    })
}

/// Flesch–Kincaid grade of the document text.
pub fn reading_grade(doc: &Document) -> Result<f64> {
    readability(&doc.text).map(|r| r.grade)
}
