//! Random forest of CART trees with Gini splits, bootstrap bagging and a
//! fresh random feature subset at every node.
//!
//! Tree `t` draws all of its randomness from a ChaCha stream selected by
//! `(seed, t)`, so trees can be grown in parallel and the serialized model
//! depends only on the data and the config.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

pub const MODEL_SCHEMA: &str = "crosscheck-rf/1";

/// Smallest impurity decrease treated as an improvement.
const MIN_DECREASE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Fake,
    Real,
}

impl Label {
    pub const ORDER: [Label; 2] = [Label::Fake, Label::Real];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::Fake => "fake",
            Label::Real => "real",
        })
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "fake" | "false" => Ok(Label::Fake),
            "real" | "true" => Ok(Label::Real),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// `None` resolves to `ceil(sqrt(n_features))` at fit time.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_trees: 100,
            max_depth: None,
            min_samples_split: 2,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(seed: u64) -> Self {
        TrainConfig {
            seed,
            ..Self::default()
        }
    }

    fn resolve(&self, n_features: usize) -> Result<TrainConfig> {
        if self.n_trees == 0 {
            return Err(Error::InvalidConfig("n_trees must be at least 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::InvalidConfig("min_samples_split must be at least 2".into()));
        }
        let fps = self
            .features_per_split
            .unwrap_or_else(|| (n_features as f64).sqrt().ceil() as usize);
        if fps == 0 || fps > n_features {
            return Err(Error::InvalidConfig(format!(
                "features_per_split {fps} outside 1..={n_features}"
            )));
        }
        Ok(TrainConfig {
            features_per_split: Some(fps),
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Training counts in `Label::ORDER`.
        counts: [usize; 2],
    },
}

/// Majority class of a count pair; ties go to fake.
fn majority(counts: [usize; 2]) -> Label {
    if counts[Label::Fake.index()] >= counts[Label::Real.index()] {
        Label::Fake
    } else {
        Label::Real
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Samples go left when `x[feature] <= threshold`.
    pub fn leaf_counts(&self, x: &[f64]) -> [usize; 2] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => return *counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        majority(self.leaf_counts(x))
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    fn validate(&self, n_features: usize) -> Result<()> {
        let bad = |msg: String| Error::Parse { line: 0, message: msg };
        if self.nodes.is_empty() {
            return Err(bad("tree without nodes".into()));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Split {
                feature,
                threshold,
                left,
                right,
            } = node
            {
                if *feature >= n_features || !threshold.is_finite() {
                    return Err(bad(format!("node {i} has an invalid split")));
                }
                // children are always stored after their parent
                if *left <= i || *right <= i || *left >= self.nodes.len() || *right >= self.nodes.len() {
                    return Err(bad(format!("node {i} has out-of-range children")));
                }
            }
        }
        Ok(())
    }
}

pub fn gini(counts: [usize; 2]) -> Result<f64> {
    let total = counts[0] + counts[1];
    if total == 0 {
        return Err(Error::EmptyNode);
    }
    let n = total as f64;
    Ok(1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>())
}

fn count_labels(y: &[Label], samples: &[usize]) -> [usize; 2] {
    let mut counts = [0; 2];
    for &i in samples {
        counts[y[i].index()] += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub decrease: f64,
}

/// Exhaustive midpoint scan over the given features. Ties keep the lower
/// feature index, then the lower threshold. `None` when nothing improves.
pub fn best_split(x: &[Vec<f64>], y: &[Label], samples: &[usize], features: &[usize]) -> Option<Split> {
    if samples.len() < 2 {
        return None;
    }
    let parent = count_labels(y, samples);
    let parent_gini = gini(parent).ok()?;
    if parent_gini == 0.0 {
        return None;
    }
    let n = samples.len() as f64;
    let mut features = features.to_vec();
    features.sort_unstable();
    features.dedup();

    let mut best: Option<Split> = None;
    let mut column: Vec<(f64, Label)> = Vec::with_capacity(samples.len());
    for &f in &features {
        column.clear();
        column.extend(samples.iter().map(|&i| (x[i][f], y[i])));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut left = [0usize; 2];
        for w in 0..column.len() - 1 {
            left[column[w].1.index()] += 1;
            let (lo, hi) = (column[w].0, column[w + 1].0);
            if lo == hi {
                continue;
            }
            let right = [parent[0] - left[0], parent[1] - left[1]];
            let nl = (left[0] + left[1]) as f64;
            let nr = (right[0] + right[1]) as f64;
            let weighted = nl / n * gini(left).ok()? + nr / n * gini(right).ok()?;
            let decrease = parent_gini - weighted;
            if decrease > best.map_or(MIN_DECREASE, |b| b.decrease + MIN_DECREASE) {
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                best = Some(Split {
                    feature: f,
                    threshold,
                    decrease,
                });
            }
        }
    }
    best
}

fn sample_features(n_features: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n_features).collect();
    for i in 0..k {
        let j = rng.random_range(i..n_features);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

fn grow_tree(
    x: &[Vec<f64>],
    y: &[Label],
    samples: Vec<usize>,
    config: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> DecisionTree {
    let n_features = x[0].len();
    let fps = config.features_per_split.expect("resolved config");
    let mut nodes: Vec<Node> = vec![Node::Leaf { counts: [0, 0] }];
    let mut stack = vec![(0usize, samples, 0usize)];
    while let Some((slot, samples, depth)) = stack.pop() {
        let counts = count_labels(y, &samples);
        let can_split = samples.len() >= config.min_samples_split
            && counts[0] > 0
            && counts[1] > 0
            && config.max_depth.is_none_or(|d| depth < d);
        let split = if can_split {
            let subset = sample_features(n_features, fps, rng);
            best_split(x, y, &samples, &subset)
        } else {
            None
        };
        match split {
            None => nodes[slot] = Node::Leaf { counts },
            Some(s) => {
                let (l, r): (Vec<usize>, Vec<usize>) = samples.iter().partition(|&&i| x[i][s.feature] <= s.threshold);
                let left = nodes.len();
                let right = left + 1;
                nodes.push(Node::Leaf { counts: [0, 0] });
                nodes.push(Node::Leaf { counts: [0, 0] });
                nodes[slot] = Node::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left,
                    right,
                };
                // right first so the left subtree is expanded first
                stack.push((right, r, depth + 1));
                stack.push((left, l, depth + 1));
            }
        }
    }
    DecisionTree { nodes }
}

pub fn tree_rng(seed: u64, tree: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub label: Label,
    /// Fraction of trees voting fake.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    pub schema: String,
    pub config: TrainConfig,
    pub layout_version: String,
    pub class_order: Vec<Label>,
    pub n_features: usize,
    pub trees: Vec<DecisionTree>,
}

impl RandomForestModel {
    pub fn fit(x: &[Vec<f64>], y: &[Label], config: &TrainConfig, layout_version: &str) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::ShapeMismatch(format!("{} rows but {} labels", x.len(), y.len())));
        }
        if x.len() < 2 {
            return Err(Error::ShapeMismatch("need at least two samples".into()));
        }
        let n_features = x[0].len();
        if n_features == 0 || x.iter().any(|row| row.len() != n_features) {
            return Err(Error::ShapeMismatch("rows differ in width".into()));
        }
        if x.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch("non-finite feature value".into()));
        }
        let counts = count_labels(y, &(0..y.len()).collect::<Vec<_>>());
        if counts[0] == 0 || counts[1] == 0 {
            return Err(Error::SingleClassData);
        }
        let config = config.resolve(n_features)?;
        let n = x.len();
        let trees = (0..config.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = tree_rng(config.seed, t);
                let samples: Vec<usize> = if config.bootstrap {
                    (0..n).map(|_| rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                grow_tree(x, y, samples, &config, &mut rng)
            })
            .collect();
        Ok(RandomForestModel {
            schema: MODEL_SCHEMA.to_string(),
            config,
            layout_version: layout_version.to_string(),
            class_order: Label::ORDER.to_vec(),
            n_features,
            trees,
        })
    }

    pub fn fit_features(x: &[FeatureVector], y: &[Label], config: &TrainConfig) -> Result<Self> {
        let layout = x
            .first()
            .map(|f| f.layout_version.clone())
            .ok_or_else(|| Error::ShapeMismatch("no samples".into()))?;
        if let Some(other) = x.iter().find(|f| f.layout_version != layout) {
            return Err(Error::LayoutMismatch {
                expected: layout,
                found: other.layout_version.clone(),
            });
        }
        let rows: Vec<Vec<f64>> = x.iter().map(|f| f.values.to_vec()).collect();
        Self::fit(&rows, y, config, &layout)
    }

    /// Majority vote of the trees; an even split goes to fake.
    pub fn predict_raw(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.n_features {
            return Err(Error::DimMismatch {
                left: x.len(),
                right: self.n_features,
            });
        }
        let fake_votes = self.trees.iter().filter(|t| t.predict(x) == Label::Fake).count();
        let score = fake_votes as f64 / self.trees.len() as f64;
        let label = if 2 * fake_votes >= self.trees.len() {
            Label::Fake
        } else {
            Label::Real
        };
        Ok(Prediction { label, score })
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Prediction> {
        if x.layout_version != self.layout_version {
            return Err(Error::LayoutMismatch {
                expected: self.layout_version.clone(),
                found: x.layout_version.clone(),
            });
        }
        self.predict_raw(&x.values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(content: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(content).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or_default();
        if schema != MODEL_SCHEMA {
            return Err(Error::SchemaVersionMismatch {
                expected: MODEL_SCHEMA.into(),
                found: schema.into(),
            });
        }
        let model: RandomForestModel = serde_json::from_value(value).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        if model.trees.is_empty() || model.class_order != Label::ORDER {
            return Err(Error::Parse {
                line: 0,
                message: "model needs trees and class order [fake, real]".into(),
            });
        }
        for tree in &model.trees {
            tree.validate(model.n_features)?;
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&content)
    }
}

pub fn save_model(model: &RandomForestModel, path: impl AsRef<Path>) -> Result<()> {
    model.save(path)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<RandomForestModel> {
    RandomForestModel::load(path)
}
