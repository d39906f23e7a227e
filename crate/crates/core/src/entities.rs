//! Named-entity extraction for the clustering vocabulary.
//!
//! The default extractor is a capitalization heuristic plus a gazetteer of
//! known phrases. Anything implementing [`ExtractEntities`] can replace it.

use std::path::Path;

use crate::corpus::decode_lossy;
use crate::error::{Error, Result};

const DEFAULT_GAZETTEER: &str = include_str!("../data/gazetteer.txt");

pub trait ExtractEntities: Send + Sync {
    /// Returns lowercased entity strings; repeated entities are repeated.
    fn extract(&self, text_cased: &str) -> Vec<String>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GazetteerEntry {
    phrase: String,
    keys: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityExtractor {
    gazetteer: Vec<GazetteerEntry>,
    min_token_len: usize,
}

/// Lowercase alphanumeric skeleton of a token, used for gazetteer matching so
/// that `Covid-19` in raw text and `Covid19` in cleaned text both hit `covid-19`.
fn match_key(token: &str) -> String {
    token
        .chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

impl EntityExtractor {
    pub const DEFAULT_MIN_TOKEN_LEN: usize = 2;

    pub fn new<I, S>(phrases: I, min_token_len: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if min_token_len == 0 {
            return Err(Error::InvalidConfig("min_token_len must be positive".into()));
        }
        let mut gazetteer: Vec<GazetteerEntry> = Vec::new();
        for phrase in phrases {
            let phrase = phrase
                .as_ref()
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ")
                .to_lowercase();
            if phrase.is_empty() {
                continue;
            }
            let keys: Vec<String> = phrase.split(' ').map(match_key).collect();
            if keys.iter().any(String::is_empty) {
                return Err(Error::InvalidConfig(format!(
                    "gazetteer phrase {phrase:?} has a token without letters or digits"
                )));
            }
            if !gazetteer.iter().any(|g| g.keys == keys) {
                gazetteer.push(GazetteerEntry { phrase, keys });
            }
        }
        Ok(EntityExtractor {
            gazetteer,
            min_token_len,
        })
    }

    /// Capitalization rule only.
    pub fn without_gazetteer() -> Self {
        EntityExtractor {
            gazetteer: Vec::new(),
            min_token_len: Self::DEFAULT_MIN_TOKEN_LEN,
        }
    }

    /// Gazetteer file: one phrase per line, `#` comment lines allowed.
    pub fn parse_gazetteer(content: &str, min_token_len: usize) -> Result<Self> {
        Self::new(
            content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
            min_token_len,
        )
    }

    pub fn from_gazetteer_file(path: impl AsRef<Path>, min_token_len: usize) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::parse_gazetteer(&decode_lossy(&bytes), min_token_len)
    }

    /// Capitalization rule plus the bundled news gazetteer.
    pub fn with_default_gazetteer() -> Self {
        Self::parse_gazetteer(DEFAULT_GAZETTEER, Self::DEFAULT_MIN_TOKEN_LEN).expect("bundled gazetteer is valid")
    }

    pub fn gazetteer(&self) -> impl Iterator<Item = &str> {
        self.gazetteer.iter().map(|g| g.phrase.as_str())
    }

    pub fn min_token_len(&self) -> usize {
        self.min_token_len
    }

    fn is_capitalized(&self, token: &str) -> bool {
        token.chars().next().is_some_and(char::is_uppercase) && token.chars().count() >= self.min_token_len
    }
}

impl ExtractEntities for EntityExtractor {
    fn extract(&self, text_cased: &str) -> Vec<String> {
        // (start, end) byte spans of whitespace-separated tokens
        let mut spans = Vec::new();
        let mut start = None;
        for (i, c) in text_cased.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    spans.push((s, i));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            spans.push((s, text_cased.len()));
        }
        let token = |i: usize| &text_cased[spans[i].0..spans[i].1];
        let slice = |from: usize, to: usize| text_cased[spans[from].0..spans[to].1].to_lowercase();

        let mut out = Vec::new();

        let mut i = 0;
        while i < spans.len() {
            if !self.is_capitalized(token(i)) {
                i += 1;
                continue;
            }
            let mut j = i;
            while j + 1 < spans.len() && self.is_capitalized(token(j + 1)) {
                j += 1;
            }
            if j > i {
                out.push(slice(i, j));
            }
            out.extend((i..=j).map(|t| token(t).to_lowercase()));
            i = j + 1;
        }

        if !self.gazetteer.is_empty() {
            let keys: Vec<String> = (0..spans.len()).map(|t| match_key(token(t))).collect();
            for pos in 0..keys.len() {
                for entry in &self.gazetteer {
                    let n = entry.keys.len();
                    if pos + n <= keys.len() && keys[pos..pos + n] == entry.keys[..] {
                        out.push(slice(pos, pos + n - 1));
                    }
                }
            }
        }
        out
    }
}
