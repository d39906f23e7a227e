//! Checks the Kabul claim against the bundled week of posts.
//!
//! The forest is trained on the synthetic benchmark first, since no
//! labeled claims ship for the Kabul week itself.
//!
//! ```sh
//! cargo run --example check_claim -- "Marines killed in the Kabul airport attack"
//! ```

use crosscheck::app::{ingest_default, train_pipeline, Outcome, Pipeline, PipelineConfig};
use crosscheck::corpus::{parse_posts, parse_timestamp};
use crosscheck::features::{FeatureExtractor, FEATURE_NAMES};
use crosscheck::forest::TrainConfig;
use crosscheck::synthetic::{generate, SyntheticConfig, DEFAULT_SEED};

fn main() -> crosscheck::Result<()> {
    let claim = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "No marines were killed in the Kabul airport attack, they were just injured.".into());

    let bench = generate(&SyntheticConfig::default());
    let training = Pipeline::new(
        ingest_default(bench.posts.clone())?,
        FeatureExtractor::fixture(),
        PipelineConfig::default(),
    )?;
    let (model, _) = train_pipeline(&bench.claims, &training, &TrainConfig::with_seed(DEFAULT_SEED))?;

    let corpus = ingest_default(parse_posts(include_str!("../data/kabul_window.jsonl"))?)?;
    let pipeline = Pipeline::new(corpus, FeatureExtractor::fixture(), PipelineConfig::default())?;
    let time = parse_timestamp("2021-08-26T00:00:00Z").expect("valid timestamp");

    println!("claim: {claim}");
    match pipeline.check(&claim, time, &model)? {
        Outcome::Verdict(v) => {
            println!("verdict: {} (fake votes {:.2})", v.label, v.score);
            println!(
                "story {} with {} posts",
                v.matched_cluster.index, v.matched_cluster.size
            );
            for e in &v.evidence {
                println!("  {:.3} [{}] {}", e.cosine, e.source, e.text);
            }
            for (name, value) in FEATURE_NAMES.iter().zip(v.features.values) {
                println!("  {name:>18} {value:+.3}");
            }
        }
        Outcome::Unverifiable { reason } => println!("unverifiable: {reason}"),
    }
    Ok(())
}
