use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crosscheck::affect::{EmotionLexicon, SentimentLexicon};
use crosscheck::app::dataset::claims_to_jsonl;
use crosscheck::app::{
    evaluate, ingest, load_claims, split_train_test, train_pipeline, CorpusStore, Outcome, Pipeline, PipelineConfig,
    DEFAULT_TEST_FRACTION,
};
use crosscheck::corpus::{load_posts, parse_timestamp, Stopwords};
use crosscheck::embedding::WordVectorStore;
use crosscheck::entities::EntityExtractor;
use crosscheck::features::FeatureExtractor;
use crosscheck::forest::{RandomForestModel, TrainConfig};
use crosscheck::synthetic::{generate, SyntheticConfig};
use crosscheck::{Error, Result};

/// Checks short claims against a time-windowed corpus of reliable posts.
#[derive(Parser)]
#[command(name = "crosscheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean posts from a JSONL file into a corpus store.
    Ingest {
        #[arg(long)]
        posts: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        #[arg(long, default_value_t = EntityExtractor::DEFAULT_MIN_TOKEN_LEN)]
        min_token_len: usize,
    },
    /// Check one claim and print the verdict as JSON.
    Check {
        #[arg(long)]
        claim: String,
        #[arg(long)]
        time: String,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Print the feature vector and evidence for one claim.
    ExtractFeatures {
        #[arg(long)]
        claim: String,
        #[arg(long)]
        time: String,
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Train a model on labeled claims, holding out a test split.
    Train {
        #[arg(long)]
        claims: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TEST_FRACTION)]
        test_fraction: f64,
        /// Where to write the held-out claims as JSONL.
        #[arg(long)]
        holdout: Option<PathBuf>,
        /// Where to write the training report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        n_trees: usize,
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Score a model on labeled claims and print metrics as JSON.
    Evaluate {
        #[arg(long)]
        claims: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Training report whose ids are checked for overlap.
        #[arg(long)]
        train_report: Option<PathBuf>,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Print the story clusters of the window around a time.
    ClusterReport {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        time: String,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Write the seeded synthetic benchmark (posts and labeled claims).
    Synthetic {
        #[arg(long)]
        posts: PathBuf,
        #[arg(long)]
        claims: PathBuf,
        #[arg(long, default_value_t = crosscheck::synthetic::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct AnalysisArgs {
    /// Word vectors in `word v1 .. vN` text format.
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// TSV of `word<TAB>weight`.
    #[arg(long)]
    sentiment_lexicon: Option<PathBuf>,
    /// TSV of `word<TAB>emotion`.
    #[arg(long)]
    emotion_lexicon: Option<PathBuf>,
    /// Most evidence posts kept.
    #[arg(long, default_value_t = crosscheck::clustering::DEFAULT_MAX_EVIDENCE)]
    m: usize,
    /// Minimum evidence cosine.
    #[arg(long, default_value_t = crosscheck::clustering::DEFAULT_RELEVANCE_THRESHOLD)]
    tau: f64,
    #[arg(long, default_value_t = crosscheck::corpus::TimeWindow::DEFAULT_RADIUS_DAYS)]
    radius_days: u32,
    /// Clustering seed.
    #[arg(long, default_value_t = 0)]
    cluster_seed: u64,
}

impl AnalysisArgs {
    fn pipeline(&self, corpus: &Path) -> Result<Pipeline> {
        let vectors = match &self.vectors {
            Some(p) => WordVectorStore::load(p)?,
            None => WordVectorStore::fixture(),
        };
        let sentiment = match &self.sentiment_lexicon {
            Some(p) => SentimentLexicon::load(p)?,
            None => SentimentLexicon::fixture(),
        };
        let emotion = match &self.emotion_lexicon {
            Some(p) => EmotionLexicon::load(p)?,
            None => EmotionLexicon::fixture(),
        };
        let config = PipelineConfig {
            radius_days: self.radius_days,
            max_evidence: self.m,
            relevance_threshold: self.tau,
            seed: self.cluster_seed,
        };
        Pipeline::new(
            CorpusStore::load(corpus)?,
            FeatureExtractor::new(vectors, sentiment, emotion),
            config,
        )
    }
}

fn time_arg(raw: &str) -> Result<chrono::DateTime<chrono::Utc>> {
    parse_timestamp(raw).map_err(Error::InvalidConfig)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let json = serde_json::to_string_pretty(value).expect("output serializes");
    std::fs::write(path, json).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn unverifiable(reason: crosscheck::app::UnverifiableReason) -> ExitCode {
    print_json(&Outcome::Unverifiable { reason });
    ExitCode::from(2)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest {
            posts,
            out,
            stopwords,
            gazetteer,
            min_token_len,
        } => {
            let stopwords = match stopwords {
                Some(p) => Stopwords::from_file(p)?,
                None => Stopwords::english(),
            };
            let extractor = match gazetteer {
                Some(p) => EntityExtractor::from_gazetteer_file(p, min_token_len)?,
                None => EntityExtractor::with_default_gazetteer(),
            };
            let store = ingest(load_posts(&posts)?, &stopwords, &extractor)?;
            store.save(&out)?;
            eprintln!("ingested {} posts, skipped {}", store.posts.len(), store.skipped.len());
        }
        Command::Check {
            claim,
            time,
            corpus,
            model,
            analysis,
        } => {
            let time = time_arg(&time)?;
            let model = RandomForestModel::load(&model)?;
            let outcome = analysis.pipeline(&corpus)?.check(&claim, time, &model)?;
            println!("{}", outcome.to_json());
            if outcome.verdict().is_none() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::ExtractFeatures {
            claim,
            time,
            corpus,
            analysis,
        } => {
            let time = time_arg(&time)?;
            match analysis.pipeline(&corpus)?.analyze(&claim, time)? {
                Ok(a) => print_json(&a),
                Err(reason) => return Ok(unverifiable(reason)),
            }
        }
        Command::Train {
            claims,
            corpus,
            seed,
            out,
            test_fraction,
            holdout,
            report,
            n_trees,
            max_depth,
            analysis,
        } => {
            let pipeline = analysis.pipeline(&corpus)?;
            let (train, test) = split_train_test(&load_claims(&claims)?, test_fraction, seed)?;
            let config = TrainConfig {
                n_trees,
                max_depth,
                ..TrainConfig::with_seed(seed)
            };
            let (model, train_report) = train_pipeline(&train, &pipeline, &config)?;
            model.save(&out)?;
            if let Some(path) = holdout {
                std::fs::write(&path, claims_to_jsonl(&test)).map_err(|e| io_error(&path, e))?;
            }
            let summary = serde_json::json!({
                "test_fraction": test_fraction,
                "split_seed": seed,
                "n_train": train.len(),
                "n_test": test.len(),
                "training": train_report,
            });
            match report {
                Some(path) => write_json(&path, &summary)?,
                None => eprintln!("{}", serde_json::to_string_pretty(&summary).expect("report serializes")),
            }
        }
        Command::Evaluate {
            claims,
            corpus,
            model,
            train_report,
            analysis,
        } => {
            let model = RandomForestModel::load(&model)?;
            let training_ids = match train_report {
                Some(path) => read_training_ids(&path)?,
                None => Vec::new(),
            };
            let report = evaluate(
                &model,
                &load_claims(&claims)?,
                &analysis.pipeline(&corpus)?,
                &training_ids,
            )?;
            if !report.overlapping_ids.is_empty() {
                eprintln!(
                    "warning: {} evaluated claims were used in training",
                    report.overlapping_ids.len()
                );
            }
            print_json(&report);
        }
        Command::ClusterReport { corpus, time, analysis } => {
            let time = time_arg(&time)?;
            match analysis.pipeline(&corpus)?.cluster_report(time)? {
                Ok(r) => print_json(&r),
                Err(reason) => return Ok(unverifiable(reason)),
            }
        }
        Command::Synthetic { posts, claims, seed } => {
            let bench = generate(&SyntheticConfig {
                seed,
                ..SyntheticConfig::default()
            });
            std::fs::write(&posts, bench.posts_jsonl()).map_err(|e| io_error(&posts, e))?;
            std::fs::write(&claims, bench.claims_jsonl()).map_err(|e| io_error(&claims, e))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_training_ids(path: &Path) -> Result<Vec<String>> {
    let raw = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&raw).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let ids = value
        .pointer("/training/training_ids")
        .or_else(|| value.get("training_ids"))
        .and_then(|v| v.as_array())
        .map(|a| a.iter().filter_map(|s| s.as_str().map(str::to_owned)).collect())
        .unwrap_or_default();
    Ok(ids)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
