//! Groups a week of posts into stories and prints what each story is about.
//!
//! ```sh
//! cargo run --example cluster_stories
//! ```

use crosscheck::app::{ingest_default, Pipeline, PipelineConfig};
use crosscheck::corpus::{parse_posts, parse_timestamp};
use crosscheck::features::FeatureExtractor;

fn main() -> crosscheck::Result<()> {
    let corpus = ingest_default(parse_posts(include_str!("../data/kabul_window.jsonl"))?)?;
    let pipeline = Pipeline::new(corpus, FeatureExtractor::fixture(), PipelineConfig::default())?;
    let time = parse_timestamp("2021-08-26T00:00:00Z").expect("valid timestamp");

    let report = match pipeline.cluster_report(time)? {
        Ok(r) => r,
        Err(reason) => {
            println!("nothing to cluster: {reason}");
            return Ok(());
        }
    };
    println!(
        "{} posts in window, k = {}, mean silhouette {:.3}",
        report.window_size, report.k, report.silhouette
    );
    for c in &report.clusters {
        let top: Vec<&str> = c
            .summary
            .top_entities
            .iter()
            .take(4)
            .map(|e| e.entity.as_str())
            .collect();
        println!(
            "story {} ({} posts): {}",
            c.summary.index,
            c.summary.size,
            top.join(", ")
        );
        println!("    {}", c.post_ids.join(" "));
    }
    Ok(())
}
