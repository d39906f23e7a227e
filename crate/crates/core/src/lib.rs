//! Cross-checking short claims against a time-windowed corpus of posts from
//! reliable sources.
//!
//! A claim is placed in the news story it talks about (entity TF-IDF plus
//! k-means over the posts near its timestamp), compared with the closest
//! posts of that story on meaning, sentiment and emotion, and the resulting
//! 12 features are classified fake or real by a random forest.
//!
//! ```no_run
//! use crosscheck::app::{ingest_default, Outcome, Pipeline, PipelineConfig};
//! use crosscheck::corpus::{load_posts, parse_timestamp};
//! use crosscheck::features::FeatureExtractor;
//! use crosscheck::forest::RandomForestModel;
//!
//! let corpus = ingest_default(load_posts("posts.jsonl")?)?;
//! let model = RandomForestModel::load("model.json")?;
//! let pipeline = Pipeline::new(corpus, FeatureExtractor::fixture(), PipelineConfig::default())?;
//! let time = parse_timestamp("2021-08-26T12:00:00Z").unwrap();
//! match pipeline.check("No marines were killed", time, &model)? {
//!     Outcome::Verdict(v) => println!("{} ({:.2})", v.label, v.score),
//!     Outcome::Unverifiable { reason } => println!("cannot check: {reason}"),
//! }
//! # Ok::<(), crosscheck::Error>(())
//! ```

pub mod affect;
pub mod app;
pub mod clustering;
pub mod corpus;
pub mod embedding;
pub mod entities;
pub mod error;
pub mod features;
pub mod forest;
pub mod synthetic;
pub mod vectorizer;

pub use error::{Error, Result};
