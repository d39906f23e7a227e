//! Lexicon sentiment and five-way emotion profiles.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::decode_lossy;
use crate::error::{Error, Result};

const FIXTURE_SENTIMENT: &str = include_str!("../data/sentiment_lexicon.tsv");
const FIXTURE_EMOTION: &str = include_str!("../data/emotion_lexicon.tsv");

pub trait SentimentAnalyzer: Send + Sync {
    /// Polarity in `[-1, 1]`; 0 is neutral.
    fn score(&self, tokens: &[String]) -> f64;
}

pub trait EmotionAnalyzer: Send + Sync {
    fn profile(&self, tokens: &[String]) -> EmotionVector;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Happy,
    Angry,
    Sad,
    Surprise,
    Fear,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Happy,
        Emotion::Angry,
        Emotion::Sad,
        Emotion::Surprise,
        Emotion::Fear,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Emotion::Happy => "happy",
            Emotion::Angry => "angry",
            Emotion::Sad => "sad",
            Emotion::Surprise => "surprise",
            Emotion::Fear => "fear",
        };
        f.write_str(s)
    }
}

impl FromStr for Emotion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "happy" => Ok(Emotion::Happy),
            "angry" | "anger" => Ok(Emotion::Angry),
            "sad" | "sadness" => Ok(Emotion::Sad),
            "surprise" => Ok(Emotion::Surprise),
            "fear" => Ok(Emotion::Fear),
            other => Err(format!("unknown emotion label {other:?}")),
        }
    }
}

/// Shares in (happy, angry, sad, surprise, fear) order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EmotionVector(pub [f64; 5]);

impl EmotionVector {
    pub fn get(&self, e: Emotion) -> f64 {
        self.0[e.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Non-comment lines of a two-column TSV, with 1-based line numbers.
fn tsv_rows(content: &str) -> impl Iterator<Item = Result<(usize, String, &str)>> {
    content.lines().enumerate().filter_map(|(idx, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut cols = trimmed.split('\t');
        let row = match (cols.next(), cols.next(), cols.next()) {
            (Some(word), Some(value), None) if !word.trim().is_empty() => {
                Ok((idx + 1, word.trim().to_lowercase(), value.trim()))
            }
            _ => Err(Error::Parse {
                line: idx + 1,
                message: "expected `word<TAB>value`".into(),
            }),
        };
        Some(row)
    })
}

fn read_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(decode_lossy(&bytes))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentimentLexicon {
    weights: HashMap<String, f64>,
}

impl SentimentLexicon {
    pub fn new<I: IntoIterator<Item = (String, f64)>>(entries: I) -> Result<Self> {
        let mut weights = HashMap::new();
        for (word, w) in entries {
            if !w.is_finite() || !(-1.0..=1.0).contains(&w) {
                return Err(Error::InvalidConfig(format!(
                    "sentiment weight {w} for {word:?} outside [-1, 1]"
                )));
            }
            weights.insert(word.to_lowercase(), w);
        }
        Ok(SentimentLexicon { weights })
    }

    /// TSV `word<TAB>weight`.
    pub fn parse(content: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for row in tsv_rows(content) {
            let (line, word, value) = row?;
            let w: f64 = value.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad weight {value:?}"),
            })?;
            entries.push((word, w));
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn fixture() -> Self {
        Self::parse(FIXTURE_SENTIMENT).expect("bundled sentiment lexicon is valid")
    }

    pub fn weight(&self, word: &str) -> Option<f64> {
        self.weights.get(word).copied()
    }
}

impl SentimentAnalyzer for SentimentLexicon {
    fn score(&self, tokens: &[String]) -> f64 {
        let hits: Vec<f64> = tokens.iter().filter_map(|t| self.weight(t)).collect();
        if hits.is_empty() {
            return 0.0;
        }
        (hits.iter().sum::<f64>() / hits.len() as f64).clamp(-1.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmotionLexicon {
    labels: HashMap<String, Emotion>,
}

impl EmotionLexicon {
    pub fn new<I: IntoIterator<Item = (String, Emotion)>>(entries: I) -> Result<Self> {
        let mut labels = HashMap::new();
        for (word, e) in entries {
            let word = word.to_lowercase();
            if let Some(prev) = labels.insert(word.clone(), e) {
                if prev != e {
                    return Err(Error::InvalidConfig(format!("{word:?} labelled both {prev} and {e}")));
                }
            }
        }
        Ok(EmotionLexicon { labels })
    }

    /// TSV `word<TAB>label`.
    pub fn parse(content: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for row in tsv_rows(content) {
            let (line, word, value) = row?;
            let e = value
                .parse::<Emotion>()
                .map_err(|message| Error::Parse { line, message })?;
            entries.push((word, e));
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn fixture() -> Self {
        Self::parse(FIXTURE_EMOTION).expect("bundled emotion lexicon is valid")
    }

    pub fn label(&self, word: &str) -> Option<Emotion> {
        self.labels.get(word).copied()
    }
}

impl EmotionAnalyzer for EmotionLexicon {
    fn profile(&self, tokens: &[String]) -> EmotionVector {
        let mut counts = [0usize; 5];
        for t in tokens {
            if let Some(e) = self.label(t) {
                counts[e.index()] += 1;
            }
        }
        let total: usize = counts.iter().sum();
        if total == 0 {
            return EmotionVector::default();
        }
        EmotionVector(counts.map(|c| c as f64 / total as f64))
    }
}

pub fn sentiment(tokens: &[String], analyzer: &dyn SentimentAnalyzer) -> f64 {
    analyzer.score(tokens)
}

pub fn emotion(tokens: &[String], analyzer: &dyn EmotionAnalyzer) -> EmotionVector {
    analyzer.profile(tokens)
}

/// Mean reliable score minus the target score.
pub fn sentiment_diff(target: f64, reliable: &[f64]) -> Result<f64> {
    if reliable.is_empty() {
        return Err(Error::EmptyReliableSet);
    }
    let mean = reliable.iter().sum::<f64>() / reliable.len() as f64;
    Ok(mean - target)
}
