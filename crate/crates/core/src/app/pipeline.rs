//! End-to-end claim checking: window, entity TF-IDF, story clustering,
//! evidence filtering, features and the forest verdict.

use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::store::CorpusStore;
use crate::clustering::{
    assign, filter_relevant, select_k, StoryClustering, DEFAULT_MAX_EVIDENCE, DEFAULT_RELEVANCE_THRESHOLD,
};
use crate::corpus::{clean_text, rfc3339_secs, select_window, CleanPost, Stopwords, TimeWindow};
use crate::entities::ExtractEntities;
use crate::error::{Error, Result};
use crate::features::{FeatureExtractor, FeatureVector};
use crate::forest::{Label, RandomForestModel};
use crate::vectorizer::{SparseVector, TfIdfModel};

/// Entities listed per cluster summary.
pub const TOP_ENTITIES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub radius_days: u32,
    /// Most evidence posts kept from the matched story.
    pub max_evidence: usize,
    /// Minimum cosine between a story post and the claim.
    pub relevance_threshold: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            radius_days: TimeWindow::DEFAULT_RADIUS_DAYS,
            max_evidence: DEFAULT_MAX_EVIDENCE,
            relevance_threshold: DEFAULT_RELEVANCE_THRESHOLD,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        if self.max_evidence == 0 {
            return Err(Error::InvalidConfig("max_evidence must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.relevance_threshold) {
            return Err(Error::InvalidConfig(format!(
                "relevance threshold {} outside [0, 1]",
                self.relevance_threshold
            )));
        }
        TimeWindow::new(Utc::now(), self.radius_days).map(|_| ())
    }
}

/// The stage at which a claim could not be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnverifiableReason {
    EmptyWindow,
    EmptyVocabulary,
    ZeroTargetVector,
    NoRelevantStory,
}

impl UnverifiableReason {
    fn from_error(e: &Error) -> Option<Self> {
        match e {
            Error::EmptyWindow => Some(Self::EmptyWindow),
            Error::EmptyVocabulary => Some(Self::EmptyVocabulary),
            Error::ZeroTargetVector | Error::EmptyAfterCleaning => Some(Self::ZeroTargetVector),
            Error::NoRelevantStory => Some(Self::NoRelevantStory),
            _ => None,
        }
    }
}

impl std::fmt::Display for UnverifiableReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedEntity {
    pub entity: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub index: usize,
    pub size: usize,
    pub top_entities: Vec<WeightedEntity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub id: String,
    pub source: String,
    #[serde(with = "rfc3339_secs")]
    pub timestamp: DateTime<Utc>,
    pub text: String,
    pub cosine: f64,
}

/// Everything the pipeline learned about a claim short of the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub window_size: usize,
    pub k: usize,
    pub silhouette: f64,
    pub matched_cluster: ClusterSummary,
    pub evidence: Vec<Evidence>,
    pub features: FeatureVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub label: Label,
    pub score: f64,
    pub matched_cluster: ClusterSummary,
    pub evidence: Vec<Evidence>,
    pub features: FeatureVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Verdict(Verdict),
    Unverifiable { reason: UnverifiableReason },
}

impl Outcome {
    pub fn verdict(&self) -> Option<&Verdict> {
        match self {
            Outcome::Verdict(v) => Some(v),
            Outcome::Unverifiable { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterDetail {
    #[serde(flatten)]
    pub summary: ClusterSummary,
    pub post_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    #[serde(with = "rfc3339_secs")]
    pub window_start: DateTime<Utc>,
    #[serde(with = "rfc3339_secs")]
    pub window_end: DateTime<Utc>,
    pub window_size: usize,
    /// Window posts with at least one in-vocabulary entity.
    pub clustered: usize,
    pub k: usize,
    pub silhouette: f64,
    pub clusters: Vec<ClusterDetail>,
}

/// Window-level state shared by every claim checked against one window.
struct WindowModel<'a> {
    posts: Vec<&'a CleanPost>,
    tfidf: TfIdfModel,
    /// Indices into `posts` of the nonzero vectors, in window order.
    clustered: Vec<usize>,
    vectors: Vec<SparseVector>,
    clustering: StoryClustering,
}

impl WindowModel<'_> {
    fn summary(&self, cluster: usize) -> ClusterSummary {
        let mut weights = vec![0.0; self.tfidf.dim()];
        let mut size = 0;
        for m in self.clustering.members(cluster) {
            size += 1;
            for &(col, w) in self.vectors[m].pairs() {
                weights[col] += w;
            }
        }
        let mut cols: Vec<usize> = (0..weights.len()).filter(|&c| weights[c] > 0.0).collect();
        cols.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        cols.truncate(TOP_ENTITIES);
        ClusterSummary {
            index: cluster,
            size,
            top_entities: cols
                .into_iter()
                .map(|c| WeightedEntity {
                    entity: self.tfidf.terms()[c].clone(),
                    weight: weights[c],
                })
                .collect(),
        }
    }
}

/// A corpus plus the analyzers needed to check claims against it.
#[derive(Clone)]
pub struct Pipeline {
    corpus: CorpusStore,
    stopwords: Stopwords,
    extractor: Arc<dyn ExtractEntities>,
    features: FeatureExtractor,
    config: PipelineConfig,
}

impl std::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pipeline")
            .field("posts", &self.corpus.posts.len())
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

/// Result of a stage run: hard errors outside, unverifiable reasons inside.
pub type Staged<T> = Result<std::result::Result<T, UnverifiableReason>>;

fn staged<T>(r: Result<T>) -> Staged<T> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) => match UnverifiableReason::from_error(&e) {
            Some(reason) => Ok(Err(reason)),
            None => Err(e),
        },
    }
}

macro_rules! stage {
    ($e:expr) => {
        match staged($e)? {
            Ok(v) => v,
            Err(reason) => return Ok(Err(reason)),
        }
    };
}

impl Pipeline {
    pub fn new(corpus: CorpusStore, features: FeatureExtractor, config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let stopwords = corpus.stopword_set()?;
        let extractor: Arc<dyn ExtractEntities> = Arc::new(corpus.extractor()?);
        Ok(Pipeline {
            corpus,
            stopwords,
            extractor,
            features,
            config,
        })
    }

    /// Swaps in another entity extractor and re-extracts the corpus with it.
    pub fn with_extractor(mut self, extractor: Arc<dyn ExtractEntities>) -> Self {
        for p in &mut self.corpus.posts {
            p.entities = extractor.extract(&p.text_cased);
        }
        self.extractor = extractor;
        self
    }

    pub fn corpus(&self) -> &CorpusStore {
        &self.corpus
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn features(&self) -> &FeatureExtractor {
        &self.features
    }

    fn window_model(&self, time: DateTime<Utc>) -> Staged<WindowModel<'_>> {
        let window = TimeWindow::new(time, self.config.radius_days)?;
        let posts = stage!(select_window(&self.corpus.posts, &window));
        let docs: Vec<&[String]> = posts.iter().map(|p| p.entities.as_slice()).collect();
        let tfidf = stage!(TfIdfModel::fit(&docs));
        let mut clustered = Vec::new();
        let mut vectors = Vec::new();
        for (i, p) in posts.iter().enumerate() {
            let v = tfidf.transform(&p.entities);
            if !v.is_zero() {
                clustered.push(i);
                vectors.push(v);
            }
        }
        let dense: Vec<Vec<f64>> = vectors.iter().map(SparseVector::to_dense).collect();
        let clustering = if dense.len() >= 3 {
            select_k(&dense, self.config.seed)?
        } else {
            StoryClustering::single(&dense, self.config.seed)?
        };
        Ok(Ok(WindowModel {
            posts,
            tfidf,
            clustered,
            vectors,
            clustering,
        }))
    }

    /// Runs every stage up to and including feature extraction.
    pub fn analyze(&self, text: &str, time: DateTime<Utc>) -> Staged<Analysis> {
        let wm = match self.window_model(time)? {
            Ok(wm) => wm,
            Err(reason) => return Ok(Err(reason)),
        };
        let cleaned = stage!(clean_text(text, &self.stopwords));
        let target = CleanPost {
            id: "claim".into(),
            source: "claim".into(),
            timestamp: time,
            text: text.to_string(),
            entities: self.extractor.extract(&cleaned.text_cased),
            text_cased: cleaned.text_cased,
            text_norm: cleaned.text_norm,
            tokens: cleaned.tokens,
        };
        let target_vec = wm.tfidf.transform(&target.entities);
        let cluster = stage!(assign(&wm.clustering, &target_vec));
        let members: Vec<(&CleanPost, &SparseVector)> = wm
            .clustering
            .members(cluster)
            .map(|m| (wm.posts[wm.clustered[m]], &wm.vectors[m]))
            .collect();
        let story = stage!(filter_relevant(
            cluster,
            &members,
            &target_vec,
            self.config.max_evidence,
            self.config.relevance_threshold,
        ));
        let features = self.features.extract(&target, &story)?;
        let evidence = story
            .posts
            .iter()
            .map(|(p, cosine)| Evidence {
                id: p.id.clone(),
                source: p.source.clone(),
                timestamp: p.timestamp,
                text: p.text.clone(),
                cosine: *cosine,
            })
            .collect();
        Ok(Ok(Analysis {
            window_size: wm.posts.len(),
            k: wm.clustering.k(),
            silhouette: wm.clustering.silhouette,
            matched_cluster: wm.summary(cluster),
            evidence,
            features,
        }))
    }

    pub fn check(&self, text: &str, time: DateTime<Utc>, model: &RandomForestModel) -> Result<Outcome> {
        Ok(match self.analyze(text, time)? {
            Err(reason) => Outcome::Unverifiable { reason },
            Ok(a) => {
                let p = model.predict(&a.features)?;
                Outcome::Verdict(Verdict {
                    label: p.label,
                    score: p.score,
                    matched_cluster: a.matched_cluster,
                    evidence: a.evidence,
                    features: a.features,
                })
            }
        })
    }

    /// The story clustering of the window around `time`.
    pub fn cluster_report(&self, time: DateTime<Utc>) -> Staged<ClusterReport> {
        let window = TimeWindow::new(time, self.config.radius_days)?;
        let wm = match self.window_model(time)? {
            Ok(wm) => wm,
            Err(reason) => return Ok(Err(reason)),
        };
        let clusters = (0..wm.clustering.k())
            .map(|c| ClusterDetail {
                summary: wm.summary(c),
                post_ids: wm
                    .clustering
                    .members(c)
                    .map(|m| wm.posts[wm.clustered[m]].id.clone())
                    .collect(),
            })
            .collect();
        Ok(Ok(ClusterReport {
            window_start: window.start(),
            window_end: window.end(),
            window_size: wm.posts.len(),
            clustered: wm.clustered.len(),
            k: wm.clustering.k(),
            silhouette: wm.clustering.silhouette,
            clusters,
        }))
    }
}

/// One-shot convenience over [`Pipeline::check`].
pub fn check_claim(
    text: &str,
    time: DateTime<Utc>,
    corpus: &CorpusStore,
    model: &RandomForestModel,
    features: &FeatureExtractor,
    config: &PipelineConfig,
) -> Result<Outcome> {
    Pipeline::new(corpus.clone(), features.clone(), config.clone())?.check(text, time, model)
}
