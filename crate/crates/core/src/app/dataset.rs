//! Labeled claims: loading, class balancing and the train/test split.

use std::collections::HashSet;
use std::path::Path;

use chrono::{DateTime, NaiveDate, Utc};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{decode_lossy, parse_timestamp, rfc3339_secs};
use crate::error::{Error, Result};
use crate::forest::Label;

pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledClaim {
    pub id: String,
    pub text: String,
    #[serde(with = "rfc3339_secs")]
    pub timestamp: DateTime<Utc>,
    pub label: Label,
}

fn check_unique(claims: &[LabeledClaim]) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, c) in claims.iter().enumerate() {
        if !seen.insert(c.id.as_str()) {
            return Err(Error::DuplicateId {
                id: c.id.clone(),
                line: i + 1,
            });
        }
    }
    Ok(())
}

/// One JSON object per line with `id`, `text`, `timestamp`, `label`.
pub fn parse_claims_jsonl(content: &str) -> Result<Vec<LabeledClaim>> {
    let mut claims = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let claim: LabeledClaim = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        claims.push(claim);
    }
    check_unique(&claims)?;
    Ok(claims)
}

#[derive(Deserialize)]
struct CsvRow {
    #[serde(default)]
    id: Option<String>,
    title: String,
    date: String,
    label: String,
}

/// Dates as they appear in news CSV dumps, taken as midnight UTC.
fn parse_loose_date(raw: &str) -> Option<DateTime<Utc>> {
    if let Ok(ts) = parse_timestamp(raw) {
        return Some(ts);
    }
    const FORMATS: [&str; 5] = ["%Y-%m-%d", "%B %d, %Y", "%b %d, %Y", "%d-%b-%y", "%m/%d/%Y"];
    let raw = raw.trim();
    FORMATS
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(raw, f).ok())
        .map(|d| d.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc())
}

/// News-dataset CSV with `title`, `text`, `date`, `label` columns. The title
/// becomes the claim text; rows without an `id` column get `row-N`.
pub fn parse_claims_csv(content: &str) -> Result<Vec<LabeledClaim>> {
    let mut reader = csv::Reader::from_reader(content.as_bytes());
    let mut claims = Vec::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        // header is line 1
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let timestamp = parse_loose_date(&row.date).ok_or_else(|| Error::Parse {
            line,
            message: format!("unrecognized date {:?}", row.date),
        })?;
        let label = row
            .label
            .parse::<Label>()
            .map_err(|message| Error::Parse { line, message })?;
        claims.push(LabeledClaim {
            id: row.id.unwrap_or_else(|| format!("row-{}", i + 1)),
            text: row.title,
            timestamp,
            label,
        });
    }
    check_unique(&claims)?;
    Ok(claims)
}

/// Reads `.csv` files as the news-dataset layout and anything else as JSONL.
pub fn load_claims(path: impl AsRef<Path>) -> Result<Vec<LabeledClaim>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let content = decode_lossy(&bytes);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_claims_csv(&content)
    } else {
        parse_claims_jsonl(&content)
    }
}

pub fn claims_to_jsonl(claims: &[LabeledClaim]) -> String {
    claims
        .iter()
        .map(|c| serde_json::to_string(c).expect("claim serializes") + "\n")
        .collect()
}

pub fn class_counts<T>(items: &[T], label: impl Fn(&T) -> Label) -> [usize; 2] {
    let mut counts = [0; 2];
    for it in items {
        counts[label(it).index()] += 1;
    }
    counts
}

/// Undersamples the majority class to the minority count, then shuffles.
pub fn balance_by<T: Clone>(items: &[T], label: impl Fn(&T) -> Label, seed: u64) -> Result<Vec<T>> {
    let mut by_class: [Vec<T>; 2] = [Vec::new(), Vec::new()];
    for it in items {
        by_class[label(it).index()].push(it.clone());
    }
    let keep = by_class[0].len().min(by_class[1].len());
    if keep == 0 {
        return Err(Error::SingleClassData);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * keep);
    for mut class in by_class {
        class.shuffle(&mut rng);
        class.truncate(keep);
        out.extend(class);
    }
    out.shuffle(&mut rng);
    Ok(out)
}

pub fn balance(claims: &[LabeledClaim], seed: u64) -> Result<Vec<LabeledClaim>> {
    balance_by(claims, |c| c.label, seed)
}

/// Seeded split stratified by label; each class contributes
/// `round(test_fraction * size)` claims to the test side.
pub fn split_train_test(
    claims: &[LabeledClaim],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<LabeledClaim>, Vec<LabeledClaim>)> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(Error::InvalidConfig(format!(
            "test fraction {test_fraction} outside [0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for label in Label::ORDER {
        let mut class: Vec<LabeledClaim> = claims.iter().filter(|c| c.label == label).cloned().collect();
        class.shuffle(&mut rng);
        let n_test = (test_fraction * class.len() as f64).round() as usize;
        test.extend(class.drain(..n_test));
        train.extend(class);
    }
    train.shuffle(&mut rng);
    test.shuffle(&mut rng);
    Ok((train, test))
}
