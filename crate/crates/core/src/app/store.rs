//! The ingested corpus: cleaned reliable posts plus the cleaning and
//! extraction settings that produced them, saved as one JSON file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{clean_text, decode_lossy, CleanPost, RawPost, Stopwords};
use crate::entities::{EntityExtractor, ExtractEntities};
use crate::error::{Error, Result};

pub const CORPUS_SCHEMA: &str = "crosscheck-corpus/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStore {
    pub schema: String,
    pub stopwords: Vec<String>,
    pub gazetteer: Vec<String>,
    pub min_token_len: usize,
    pub posts: Vec<CleanPost>,
    /// Ids of raw posts that had nothing left after cleaning.
    #[serde(default)]
    pub skipped: Vec<String>,
}

impl CorpusStore {
    pub fn stopword_set(&self) -> Result<Stopwords> {
        Stopwords::new(&self.stopwords)
    }

    pub fn extractor(&self) -> Result<EntityExtractor> {
        EntityExtractor::new(&self.gazetteer, self.min_token_len)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("corpus serializes")
    }

    pub fn from_json(content: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(content).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or_default();
        if schema != CORPUS_SCHEMA {
            return Err(Error::SchemaVersionMismatch {
                expected: CORPUS_SCHEMA.into(),
                found: schema.into(),
            });
        }
        serde_json::from_value(value).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&decode_lossy(&bytes))
    }
}

/// Cleans every post and extracts its entities. Posts that clean to nothing
/// are listed in `skipped` rather than failing the whole ingest.
pub fn ingest(posts: Vec<RawPost>, stopwords: &Stopwords, extractor: &EntityExtractor) -> Result<CorpusStore> {
    let mut clean = Vec::with_capacity(posts.len());
    let mut skipped = Vec::new();
    for raw in posts {
        match clean_text(&raw.text, stopwords) {
            Ok(c) => {
                let entities = extractor.extract(&c.text_cased);
                clean.push(CleanPost {
                    id: raw.id,
                    source: raw.source,
                    timestamp: raw.timestamp,
                    text: raw.text,
                    text_cased: c.text_cased,
                    text_norm: c.text_norm,
                    tokens: c.tokens,
                    entities,
                });
            }
            Err(Error::EmptyAfterCleaning) => skipped.push(raw.id),
            Err(e) => return Err(e),
        }
    }
    Ok(CorpusStore {
        schema: CORPUS_SCHEMA.to_string(),
        stopwords: stopwords.iter().map(str::to_owned).collect(),
        gazetteer: extractor.gazetteer().map(str::to_owned).collect(),
        min_token_len: extractor.min_token_len(),
        posts: clean,
        skipped,
    })
}

/// Ingest with the bundled stopwords and gazetteer.
pub fn ingest_default(posts: Vec<RawPost>) -> Result<CorpusStore> {
    ingest(posts, &Stopwords::english(), &EntityExtractor::with_default_gazetteer())
}
