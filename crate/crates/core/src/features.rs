//! The 12-wide feature vector fed to the verdict classifier.
//!
//! | index | feature |
//! |-------|---------|
//! | 0     | mean embedding cosine between target and each matched post |
//! | 1     | mean matched-post sentiment minus target sentiment |
//! | 2..=6 | target emotion profile (happy, angry, sad, surprise, fear) |
//! | 7..=11| mean emotion profile of the matched posts |

use std::borrow::Borrow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::affect::{sentiment_diff, EmotionAnalyzer, EmotionLexicon, SentimentAnalyzer, SentimentLexicon};
use crate::clustering::MatchedStory;
use crate::corpus::CleanPost;
use crate::embedding::{semantic_similarity, WordVectorStore};
use crate::error::{Error, Result};

pub const FEATURE_DIM: usize = 12;
pub const LAYOUT_VERSION: &str = "sem1-sent1-emo5-emo5/v1";

pub const FEATURE_NAMES: [&str; FEATURE_DIM] = [
    "semantic_sim",
    "sentiment_diff",
    "target_happy",
    "target_angry",
    "target_sad",
    "target_surprise",
    "target_fear",
    "story_happy",
    "story_angry",
    "story_sad",
    "story_surprise",
    "story_fear",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub layout_version: String,
    pub values: [f64; FEATURE_DIM],
}

impl FeatureVector {
    pub fn semantic_sim(&self) -> f64 {
        self.values[0]
    }

    pub fn sentiment_diff(&self) -> f64 {
        self.values[1]
    }

    pub fn target_emotion(&self) -> &[f64] {
        &self.values[2..7]
    }

    pub fn story_emotion(&self) -> &[f64] {
        &self.values[7..12]
    }
}

/// Word vectors and affect analyzers, immutable once built.
#[derive(Clone)]
pub struct FeatureExtractor {
    pub vectors: Arc<WordVectorStore>,
    pub sentiment: Arc<dyn SentimentAnalyzer>,
    pub emotion: Arc<dyn EmotionAnalyzer>,
    pub layout_version: String,
}

impl FeatureExtractor {
    pub fn new(
        vectors: WordVectorStore,
        sentiment: impl SentimentAnalyzer + 'static,
        emotion: impl EmotionAnalyzer + 'static,
    ) -> Self {
        FeatureExtractor {
            vectors: Arc::new(vectors),
            sentiment: Arc::new(sentiment),
            emotion: Arc::new(emotion),
            layout_version: LAYOUT_VERSION.to_string(),
        }
    }

    /// Bundled fixture vectors and lexicons.
    pub fn fixture() -> Self {
        Self::new(
            WordVectorStore::fixture(),
            SentimentLexicon::fixture(),
            EmotionLexicon::fixture(),
        )
    }

    pub fn extract<P: Borrow<CleanPost>>(&self, target: &CleanPost, story: &MatchedStory<P>) -> Result<FeatureVector> {
        extract_features(target, story, self)
    }
}

impl std::fmt::Debug for FeatureExtractor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FeatureExtractor")
            .field("vector_dim", &self.vectors.dim())
            .field("layout_version", &self.layout_version)
            .finish_non_exhaustive()
    }
}

pub fn extract_features<P: Borrow<CleanPost>>(
    target: &CleanPost,
    story: &MatchedStory<P>,
    extractor: &FeatureExtractor,
) -> Result<FeatureVector> {
    if story.posts.is_empty() {
        return Err(Error::EmptyStory);
    }
    let n = story.posts.len() as f64;
    let target_embedding = extractor.vectors.embed(&target.tokens);
    let target_sentiment = extractor.sentiment.score(&target.tokens);
    let target_emotion = extractor.emotion.profile(&target.tokens);

    let mut semantic = 0.0;
    let mut reliable_sentiment = Vec::with_capacity(story.posts.len());
    let mut story_emotion = [0.0; 5];
    for (post, _) in &story.posts {
        let post: &CleanPost = post.borrow();
        semantic += semantic_similarity(&target_embedding, &extractor.vectors.embed(&post.tokens))?;
        reliable_sentiment.push(extractor.sentiment.score(&post.tokens));
        let e = extractor.emotion.profile(&post.tokens);
        for (acc, x) in story_emotion.iter_mut().zip(e.0) {
            *acc += x;
        }
    }

    let mut values = [0.0; FEATURE_DIM];
    values[0] = semantic / n;
    values[1] = sentiment_diff(target_sentiment, &reliable_sentiment)?;
    values[2..7].copy_from_slice(&target_emotion.0);
    for (slot, acc) in values[7..12].iter_mut().zip(story_emotion) {
        *slot = acc / n;
    }
    Ok(FeatureVector {
        layout_version: extractor.layout_version.clone(),
        values,
    })
}
