use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{Result, SentimentError};

/// Term → integer valence in [−5, 5].
#[derive(Debug, Clone, PartialEq)]
pub struct ValenceLexicon {
    pub name: String,
    entries: HashMap<String, i8>,
}

impl ValenceLexicon {
    pub fn from_entries<I, S>(name: &str, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, i32)>,
        S: AsRef<str>,
    {
        let mut map = HashMap::new();
        for (term, score) in entries {
            let term = term.as_ref().trim().to_lowercase();
            if !(-5..=5).contains(&score) {
                return Err(SentimentError::OutOfRangeScore(term));
            }
            if map.insert(term.clone(), score as i8).is_some() {
                return Err(SentimentError::DuplicateTerm(term));
            }
        }
        Ok(Self {
            name: name.to_string(),
            entries: map,
        })
    }

    pub fn get(&self, term: &str) -> Option<i8> {
        self.entries.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i8)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Same terms with every score sign-flipped.
    pub fn negated(&self) -> Self {
        Self {
            name: format!("{}-negated", self.name),
            entries: self.entries.iter().map(|(k, &v)| (k.clone(), -v)).collect(),
        }
    }
}

/// Reads `term<TAB>score` lines; `#` starts a comment line.
pub fn parse_lexicon<R: BufRead>(name: &str, reader: R) -> Result<ValenceLexicon> {
    let mut entries = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let (term, score) = trimmed
            .rsplit_once('\t')
            .ok_or(SentimentError::MalformedLine(idx + 1))?;
        let score: i32 = score
            .trim()
            .parse()
            .map_err(|_| SentimentError::MalformedLine(idx + 1))?;
        if term.trim().is_empty() {
            return Err(SentimentError::MalformedLine(idx + 1));
        }
        entries.push((term.to_string(), score));
    }
    ValenceLexicon::from_entries(name, entries)
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<ValenceLexicon> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".into());
    parse_lexicon(&name, BufReader::new(File::open(path)?))
}
