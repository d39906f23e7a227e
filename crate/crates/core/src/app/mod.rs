//! Application layer: the ingested corpus store, the claim-checking
//! pipeline, labeled datasets, training and evaluation.

pub mod dataset;
pub mod pipeline;
pub mod store;
pub mod training;

pub use dataset::{balance, load_claims, split_train_test, LabeledClaim, DEFAULT_TEST_FRACTION};
pub use pipeline::{
    check_claim, Analysis, ClusterReport, ClusterSummary, Evidence, Outcome, Pipeline, PipelineConfig,
    UnverifiableReason, Verdict,
};
pub use store::{ingest, ingest_default, CorpusStore};
pub use training::{evaluate, train_pipeline, EvaluationReport, Metrics, TrainingReport};
