//! Word vectors in the plain-text `word v1 ... vN` format, mean-pooled into
//! text embeddings and compared by cosine.

use std::collections::HashMap;
use std::path::Path;

use crate::corpus::decode_lossy;
use crate::error::{Error, Result};

const FIXTURE_VECTORS: &str = include_str!("../data/vectors.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct WordVectorStore {
    dim: usize,
    table: HashMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector(pub Vec<f64>);

impl EmbeddingVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }
}

fn is_header(fields: &[&str]) -> bool {
    fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok())
}

impl WordVectorStore {
    /// Parses the text format. An optional first line `count dim` is a header.
    /// Later duplicates overwrite earlier ones; words are lowercased.
    pub fn parse(content: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut table = HashMap::new();
        for (idx, line) in content.lines().enumerate() {
            let line_no = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if idx == 0 && is_header(&fields) {
                dim = Some(fields[1].parse().expect("checked by is_header"));
                continue;
            }
            let values = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: format!("bad vector component {f:?}"),
                        })
                })
                .collect::<Result<Vec<f64>>>()?;
            let expected = *dim.get_or_insert(values.len());
            if values.len() != expected || expected == 0 {
                return Err(Error::DimInconsistent {
                    line: line_no,
                    expected,
                    found: values.len(),
                });
            }
            table.insert(fields[0].to_lowercase(), values);
        }
        let dim = dim.ok_or_else(|| Error::Parse {
            line: 0,
            message: "no vectors in file".into(),
        })?;
        Ok(WordVectorStore { dim, table })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&decode_lossy(&bytes))
    }

    /// The small bundled vector table used by tests and examples.
    pub fn fixture() -> Self {
        Self::parse(FIXTURE_VECTORS).expect("bundled vectors are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.table.get(word).map(Vec::as_slice)
    }

    /// Mean of in-vocabulary token vectors; zero vector when none match.
    pub fn embed<S: AsRef<str>>(&self, tokens: &[S]) -> EmbeddingVector {
        let mut acc = vec![0.0; self.dim];
        let mut hits = 0usize;
        for tok in tokens {
            if let Some(v) = self.table.get(tok.as_ref()) {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
                hits += 1;
            }
        }
        if hits > 0 {
            let n = hits as f64;
            acc.iter_mut().for_each(|a| *a /= n);
        }
        EmbeddingVector(acc)
    }
}

pub fn semantic_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    let na = a.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}
