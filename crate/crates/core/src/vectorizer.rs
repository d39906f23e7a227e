//! TF-IDF over entity lists.
//!
//! idf uses the smoothed form `ln((1 + n) / (1 + df)) + 1`; document vectors
//! are raw counts times idf, L2-normalized.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseVector {
    dim: usize,
    pairs: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn zero(dim: usize) -> Self {
        SparseVector { dim, pairs: Vec::new() }
    }

    /// Builds a vector from `(index, weight)` pairs, dropping zero weights.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.retain(|&(_, w)| w != 0.0);
        pairs.sort_by_key(|&(i, _)| i);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::ShapeMismatch("repeated index in sparse vector".into()));
        }
        if let Some(&(i, _)) = pairs.last() {
            if i >= dim {
                return Err(Error::DimMismatch {
                    left: i + 1,
                    right: dim,
                });
            }
        }
        Ok(SparseVector { dim, pairs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(usize, f64)] {
        &self.pairs
    }

    pub fn is_zero(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.pairs.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b) = (self.pairs.iter().peekable(), other.pairs.iter().peekable());
        let mut acc = 0.0;
        while let (Some(&&(i, x)), Some(&&(j, y))) = (a.peek(), b.peek()) {
            match i.cmp(&j) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    acc += x * y;
                    a.next();
                    b.next();
                }
            }
        }
        acc
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, w) in &self.pairs {
            out[i] = w;
        }
        out
    }
}

/// Cosine similarity; zero when either side is the zero vector.
pub fn cosine(u: &SparseVector, v: &SparseVector) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::DimMismatch {
            left: u.dim,
            right: v.dim,
        });
    }
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Ok(0.0);
    }
    Ok((u.dot(v) / (nu * nv)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfModel {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    idf: Vec<f64>,
    n_docs: usize,
}

impl TfIdfModel {
    pub fn fit<D: AsRef<[String]>>(docs: &[D]) -> Result<Self> {
        let mut terms: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut df: Vec<usize> = Vec::new();
        for doc in docs {
            let mut seen_here: Vec<usize> = Vec::new();
            for ent in doc.as_ref() {
                let col = *index.entry(ent.clone()).or_insert_with(|| {
                    terms.push(ent.clone());
                    df.push(0);
                    terms.len() - 1
                });
                if !seen_here.contains(&col) {
                    seen_here.push(col);
                    df[col] += 1;
                }
            }
        }
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let n = docs.len() as f64;
        let idf = df.iter().map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();
        Ok(TfIdfModel {
            terms,
            index,
            idf,
            n_docs: docs.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    /// Vocabulary in first-occurrence order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.column(term).map(|c| self.idf[c])
    }

    pub fn idf_weights(&self) -> &[f64] {
        &self.idf
    }

    pub fn transform(&self, doc: &[String]) -> SparseVector {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for ent in doc {
            if let Some(col) = self.column(ent) {
                *counts.entry(col).or_insert(0.0) += 1.0;
            }
        }
        let mut pairs: Vec<(usize, f64)> = counts.into_iter().map(|(col, tf)| (col, tf * self.idf[col])).collect();
        let norm = pairs.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, w) in &mut pairs {
                *w /= norm;
            }
        }
        SparseVector { dim: self.dim(), pairs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn three_docs() -> TfIdfModel {
        TfIdfModel::fit(&[doc(&["a"]), doc(&["a"]), doc(&["b"])]).unwrap()
    }

    #[test]
    fn smoothed_idf_hand_values() {
        let m = three_docs();
        assert_eq!(m.terms(), ["a", "b"]);
        assert!((m.idf("a").unwrap() - 1.287_682_072_451_780_9).abs() < 1e-12);
        assert!((m.idf("b").unwrap() - 1.693_147_180_559_945_4).abs() < 1e-12);
        let single = TfIdfModel::fit(&[doc(&["a"])]).unwrap();
        assert_eq!(single.idf("a"), Some(1.0));
    }

    #[test]
    fn empty_vocabulary() {
        assert!(matches!(
            TfIdfModel::fit(&[doc(&[]), doc(&[])]),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn transform_counts_and_normalizes() {
        let m = three_docs();
        let v = m.transform(&doc(&["a", "a", "b"]));
        let (x, y): (f64, f64) = (2.0 * 1.287_682_072_451_780_9, 1.693_147_180_559_945_4);
        let n = (x * x + y * y).sqrt();
        assert_eq!(v.pairs().len(), 2);
        assert!((v.pairs()[0].1 - x / n).abs() < 1e-12);
        assert!((v.pairs()[1].1 - y / n).abs() < 1e-12);
        assert!((v.pairs()[0].1 - 0.8356).abs() < 1e-4);
        assert!((v.pairs()[1].1 - 0.5494).abs() < 1e-4);
        assert!((v.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_and_oov_docs_are_zero() {
        let m = three_docs();
        let e = m.transform(&[]);
        assert!(e.is_zero());
        assert_eq!(e.dim(), 2);
        assert!(m.transform(&doc(&["z"])).is_zero());
    }

    #[test]
    fn cosine_cases() {
        let m = three_docs();
        let v = m.transform(&doc(&["a", "a", "b"]));
        assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-9);
        let a = m.transform(&doc(&["a"]));
        let b = m.transform(&doc(&["b"]));
        assert_eq!(cosine(&a, &b).unwrap(), 0.0);
        let c = cosine(&v, &a).unwrap();
        assert!((c - 0.8356).abs() < 1e-4);
        assert_eq!(cosine(&v, &SparseVector::zero(2)).unwrap(), 0.0);
        assert!(matches!(
            cosine(&v, &SparseVector::zero(3)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn from_pairs_validates() {
        assert!(SparseVector::from_pairs(2, vec![(2, 1.0)]).is_err());
        assert!(SparseVector::from_pairs(2, vec![(1, 1.0), (1, 2.0)]).is_err());
        let v = SparseVector::from_pairs(3, vec![(2, 1.0), (0, 0.0), (1, 2.0)]).unwrap();
        assert_eq!(v.pairs(), [(1, 2.0), (2, 1.0)]);
        assert_eq!(v.to_dense(), [0.0, 2.0, 1.0]);
    }
}
