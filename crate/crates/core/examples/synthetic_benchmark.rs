//! Generates the seeded benchmark, trains on 80% and scores the held-out 20%.
//!
//! ```sh
//! cargo run --release --example synthetic_benchmark -- 2021
//! ```

use crosscheck::app::{evaluate, ingest_default, split_train_test, train_pipeline, Pipeline, PipelineConfig};
use crosscheck::features::FeatureExtractor;
use crosscheck::forest::TrainConfig;
use crosscheck::synthetic::{generate, SyntheticConfig, DEFAULT_SEED};

fn main() -> crosscheck::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    let bench = generate(&SyntheticConfig {
        seed,
        ..SyntheticConfig::default()
    });
    println!(
        "{} posts, {} claims, seed {seed}",
        bench.posts.len(),
        bench.claims.len()
    );
    for c in bench.claims.iter().step_by(37) {
        println!("  {:>4}  {}", c.label, c.text);
    }

    let pipeline = Pipeline::new(
        ingest_default(bench.posts.clone())?,
        FeatureExtractor::fixture(),
        PipelineConfig::default(),
    )?;
    let (train, test) = split_train_test(&bench.claims, 0.2, seed)?;
    let (model, report) = train_pipeline(&train, &pipeline, &TrainConfig::with_seed(seed))?;
    println!(
        "trained on {} claims ({} dropped), training accuracy {:.3}",
        report.n_used,
        report.dropped.len(),
        report.training_accuracy
    );

    let eval = evaluate(&model, &test, &pipeline, &report.training_ids)?;
    let m = &eval.metrics;
    println!("held out: tp {} fp {} fn {} tn {}", m.tp, m.fp, m.fn_, m.tn);
    println!(
        "accuracy {:?} precision {:?} recall {:?}, {} unverifiable",
        m.accuracy,
        m.precision,
        m.recall,
        eval.unverifiable.len()
    );
    Ok(())
}
