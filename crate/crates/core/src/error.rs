use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate post id {id:?} at line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("no tokens survive cleaning")]
    EmptyAfterCleaning,

    #[error("no reliable post falls inside the time window")]
    EmptyWindow,

    #[error("no document in the window has any entity")]
    EmptyVocabulary,

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("vector of length {found} at line {line}, expected {expected}")]
    DimInconsistent { line: usize, expected: usize, found: usize },

    #[error("too few points: {points} for k = {k}")]
    TooFewPoints { points: usize, k: usize },

    #[error("silhouette needs at least two clusters")]
    SingleCluster,

    #[error("target shares no vocabulary with the window")]
    ZeroTargetVector,

    #[error("no post in the matched cluster passes the relevance threshold")]
    NoRelevantStory,

    #[error("reliable score list is empty")]
    EmptyReliableSet,

    #[error("matched story has no posts")]
    EmptyStory,

    #[error("impurity of an empty node is undefined")]
    EmptyNode,

    #[error("training data contains a single class")]
    SingleClassData,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("feature layout {found:?} does not match model layout {expected:?}")]
    LayoutMismatch { expected: String, found: String },

    #[error("unsupported schema {found:?}, expected {expected:?}")]
    SchemaVersionMismatch { expected: String, found: String },

    #[error("no claim could be verified against the corpus")]
    NoVerifiableClaims,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
