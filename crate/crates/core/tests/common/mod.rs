//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use std::sync::OnceLock;

use chrono::{DateTime, Utc};
use crosscheck::app::{
    ingest_default, split_train_test, train_pipeline, CorpusStore, LabeledClaim, Pipeline, PipelineConfig,
    TrainingReport,
};
use crosscheck::corpus::{parse_posts, parse_timestamp, RawPost};
use crosscheck::features::FeatureExtractor;
use crosscheck::forest::{RandomForestModel, TrainConfig};
use crosscheck::synthetic::{generate, SyntheticBenchmark, SyntheticConfig, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const KABUL_POSTS: &str = include_str!("../../data/kabul_window.jsonl");
pub const KABUL_CLAIM: &str = "No marines were killed in the Kabul airport attack, they were just injured.";
pub const KABUL_TIME: &str = "2021-08-26T00:00:00Z";
/// The four reference posts reporting the airport attack.
pub const TABLE_POSTS: [&str; 4] = ["attack-cnn", "attack-nyt", "attack-ap", "attack-bbc"];

pub fn ts(raw: &str) -> DateTime<Utc> {
    parse_timestamp(raw).expect("test timestamp")
}

pub fn kabul_store() -> CorpusStore {
    ingest_default(parse_posts(KABUL_POSTS).expect("fixture parses")).expect("fixture ingests")
}

pub fn pipeline_for(store: CorpusStore) -> Pipeline {
    Pipeline::new(store, FeatureExtractor::fixture(), PipelineConfig::default()).expect("valid pipeline")
}

pub fn kabul_pipeline() -> Pipeline {
    pipeline_for(kabul_store())
}

pub struct SyntheticSetup {
    pub bench: SyntheticBenchmark,
    pub pipeline: Pipeline,
    pub train: Vec<LabeledClaim>,
    pub test: Vec<LabeledClaim>,
    pub model: RandomForestModel,
    pub report: TrainingReport,
}

/// The benchmark with its 80/20 split and a forest trained on the 80.
pub fn synthetic() -> &'static SyntheticSetup {
    static SETUP: OnceLock<SyntheticSetup> = OnceLock::new();
    SETUP.get_or_init(|| {
        let bench = generate(&SyntheticConfig::default());
        let pipeline = pipeline_for(ingest_default(bench.posts.clone()).expect("synthetic ingests"));
        let (train, test) = split_train_test(&bench.claims, 0.2, DEFAULT_SEED).expect("split");
        let (model, report) =
            train_pipeline(&train, &pipeline, &TrainConfig::with_seed(DEFAULT_SEED)).expect("training succeeds");
        SyntheticSetup {
            bench,
            pipeline,
            train,
            test,
            model,
            report,
        }
    })
}

pub fn raw(id: &str, time: &str, text: &str) -> RawPost {
    RawPost {
        id: id.into(),
        source: "Wire".into(),
        timestamp: ts(time),
        text: text.into(),
    }
}

/// Lowercase posts with no capitalized token and no gazetteer phrase.
pub fn no_entity_store() -> CorpusStore {
    ingest_default(vec![
        raw("n1", "2021-08-26T01:00:00Z", "rain expected across the coast tonight"),
        raw("n2", "2021-08-26T02:00:00Z", "markets closed higher on friday"),
        raw("n3", "2021-08-26T03:00:00Z", "local team wins the weekend match"),
    ])
    .expect("ingests")
}

/// Posts that share one entity but are each dominated by thirty entities
/// of their own, so a claim naming only the shared one sits below the
/// default relevance threshold with every post.
pub fn diluted_store() -> CorpusStore {
    let posts = (0..5)
        .map(|p| {
            let names: Vec<String> = (0..30).map(|j| format!("Qz{p}n{j}")).collect();
            raw(
                &format!("d{p}"),
                "2021-08-26T06:00:00Z",
                &format!("Kabul report {}", names.join(" noted ")),
            )
        })
        .collect();
    ingest_default(posts).expect("ingests")
}

// ---- independent clustering oracle ----

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Textbook silhouette, written from the definition.
pub fn oracle_silhouette(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let own: Vec<usize> = (0..n).filter(|&j| j != i && labels[j] == labels[i]).collect();
        if own.is_empty() {
            continue;
        }
        let a = own.iter().map(|&j| euclid(&points[i], &points[j])).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c == labels[i] {
                continue;
            }
            let other: Vec<usize> = (0..n).filter(|&j| labels[j] == c).collect();
            if other.is_empty() {
                continue;
            }
            let d = other.iter().map(|&j| euclid(&points[i], &points[j])).sum::<f64>() / other.len() as f64;
            b = b.min(d);
        }
        let m = a.max(b);
        if m > 0.0 {
            total += (b - a) / m;
        }
    }
    total / n as f64
}

/// Every partition of `0..n` as a restricted growth string.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            rec(i + 1, n, max.max(c), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    rec(1, n, 0, &mut cur, &mut out);
    out
}

/// Best mean silhouette over all partitions into `2..=min(10, n - 1)` groups.
pub fn best_partition_silhouette(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let k_max = 10.min(n - 1);
    partitions(n)
        .into_iter()
        .filter_map(|p| {
            let k = p.iter().max().unwrap() + 1;
            (2..=k_max).contains(&k).then(|| oracle_silhouette(points, &p, k))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random instance of 2..=4 well separated groups, at least two points each,
/// `n <= 8`, in 1..=4 dimensions.
pub fn blob_instance(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let dim = rng.random_range(1..=4);
    let groups = rng.random_range(2..=4);
    let mut sizes = vec![2; groups];
    let extra = rng.random_range(0..=(8 - 2 * groups));
    for _ in 0..extra {
        let g = rng.random_range(0..groups);
        sizes[g] += 1;
    }
    // the first axis spaces groups 30 apart, the rest are free
    let centers: Vec<Vec<f64>> = (0..groups)
        .map(|g| {
            (0..dim)
                .map(|d| {
                    if d == 0 {
                        30.0 * g as f64 + rng.random_range(0.0..5.0)
                    } else {
                        rng.random_range(0.0..100.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut points = Vec::new();
    for (c, &s) in centers.iter().zip(&sizes) {
        for _ in 0..s {
            points.push(c.iter().map(|x| x + rng.random_range(-1.0..1.0)).collect());
        }
    }
    points
}

pub fn uniform_instance(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
