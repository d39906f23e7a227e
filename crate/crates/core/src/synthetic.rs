//! Seeded generator for a small labeled benchmark.
//!
//! Five fictional news stories, each told by ten reliable posts inside one
//! week, plus labeled claims about them. Real claims repeat a story's
//! affect words. Fake claims either swap them for words of the opposite
//! polarity or, for the grim stories, keep the facts but play them down
//! with a minimizer ("merely missing"), the pattern of a claim that
//! downplays casualties.
//!
//! Every affect word used here is in the bundled lexicons and vector table.

use chrono::{DateTime, Duration, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::app::dataset::LabeledClaim;
use crate::corpus::{format_timestamp, parse_timestamp, RawPost};
use crate::forest::Label;

pub const DEFAULT_SEED: u64 = 2021;

const CENTER: &str = "2024-03-10T12:00:00Z";
const SOURCES: [&str; 5] = ["Reuters", "Associated Press", "BBC World", "CNN", "NPR"];
const CONTEXT: [&str; 11] = [
    "officials",
    "report",
    "residents",
    "government",
    "police",
    "statement",
    "update",
    "region",
    "city",
    "people",
    "week",
];
const MINIMIZERS: [&str; 3] = ["just", "merely", "simply"];

struct Story {
    key: &'static str,
    /// The first entity appears in every post and claim.
    entities: [&'static str; 3],
    grim: bool,
    words: &'static [&'static str],
    opposite: &'static [&'static str],
}

const STORIES: [Story; 5] = [
    Story {
        key: "dam",
        entities: ["Northvale Dam", "Governor Ames", "Brill County"],
        grim: true,
        words: &[
            "collapsed",
            "flooded",
            "missing",
            "destroyed",
            "tragedy",
            "grief",
            "dead",
        ],
        opposite: &["safe", "unharmed", "fine", "calm", "rescued"],
    },
    Story {
        key: "riots",
        entities: ["Port Cresca", "Mayor Dunmore", "Eastgate Square"],
        grim: true,
        words: &["clashes", "looting", "outrage", "furious", "wounded", "injured"],
        opposite: &["calm", "safe", "fine", "cheered", "hope"],
    },
    Story {
        key: "vaccine",
        entities: ["Helix Labs", "Doctor Varga", "Meridian Health"],
        grim: false,
        words: &["approval", "approved", "success", "hope", "good", "breakthrough"],
        opposite: &["rejected", "failure", "scandal", "fraud", "danger", "banned"],
    },
    Story {
        key: "marathon",
        entities: ["Lake Orin Marathon", "Tavi Renko", "Orin Athletics"],
        grim: false,
        words: &["record", "stunning", "unexpected", "celebrated", "cheered", "win"],
        opposite: &["failure", "scandal", "banned", "rejected", "fraud"],
    },
    Story {
        key: "quake",
        entities: ["Mount Tarsa", "Kesh Valley", "Tarsa Observatory"],
        grim: true,
        words: &["panic", "threat", "crisis", "dangerous", "warn", "collapsed", "dead"],
        opposite: &["safe", "calm", "unharmed", "fine", "rescued"],
    },
];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub posts_per_story: usize,
    /// Half real, half fake.
    pub claims_per_story: usize,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: DEFAULT_SEED,
            posts_per_story: 10,
            claims_per_story: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBenchmark {
    pub center: DateTime<Utc>,
    pub posts: Vec<RawPost>,
    pub claims: Vec<LabeledClaim>,
}

impl SyntheticBenchmark {
    pub fn posts_jsonl(&self) -> String {
        self.posts
            .iter()
            .map(|p| serde_json::to_string(p).expect("post serializes") + "\n")
            .collect()
    }

    pub fn claims_jsonl(&self) -> String {
        crate::app::dataset::claims_to_jsonl(&self.claims)
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.random_range(0..pool.len())]
}

fn pick_distinct<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str], n: usize) -> Vec<&'a str> {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    for i in 0..n.min(pool.len()) {
        let j = rng.random_range(i..pool.len());
        idx.swap(i, j);
    }
    idx[..n.min(pool.len())].iter().map(|&i| pool[i]).collect()
}

fn post_text(rng: &mut ChaCha8Rng, story: &Story) -> String {
    let affect = pick_distinct(rng, story.words, 3);
    let ctx = pick_distinct(rng, &CONTEXT, 2);
    let (second, third) = if rng.random_bool(0.5) {
        (story.entities[1], story.entities[2])
    } else {
        (story.entities[2], story.entities[1])
    };
    format!(
        "{} {} {} {} {} {}, {} {}",
        story.entities[0], ctx[0], affect[0], second, affect[1], ctx[1], third, affect[2]
    )
}

/// Real claims restate one to three of the story's affect words.
fn aligned_claim(rng: &mut ChaCha8Rng, story: &Story) -> String {
    let n = rng.random_range(1..=3);
    let words = pick_distinct(rng, story.words, n);
    let n_ctx = rng.random_range(1..=2);
    let ctx = pick_distinct(rng, &CONTEXT, n_ctx);
    format!("{} {} {}", story.entities[0], ctx.join(" "), words.join(" "))
}

/// Fake claims of the first kind swap in words of the opposite polarity.
fn flipped_claim(rng: &mut ChaCha8Rng, story: &Story) -> String {
    let words = pick_distinct(rng, story.opposite, 2);
    let n_ctx = rng.random_range(1..=2);
    let ctx = pick_distinct(rng, &CONTEXT, n_ctx);
    format!("{} {} {}", story.entities[0], ctx.join(" "), words.join(" "))
}

/// Fake claims of the second kind state the facts but minimize one of them.
fn minimized_claim(rng: &mut ChaCha8Rng, story: &Story) -> String {
    let words = pick_distinct(rng, story.words, 3);
    let ctx = pick_distinct(rng, &CONTEXT, 2);
    format!(
        "{} {} {} {}, {} {} {}",
        story.entities[0],
        ctx[0],
        words[0],
        words[1],
        ctx[1],
        pick(rng, &MINIMIZERS),
        words[2]
    )
}

pub fn generate(config: &SyntheticConfig) -> SyntheticBenchmark {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let center = parse_timestamp(CENTER).expect("valid center");
    let two_days = 2 * 24 * 3600;
    let half_day = 12 * 3600;

    let mut posts = Vec::new();
    for story in &STORIES {
        for i in 0..config.posts_per_story {
            let offset = rng.random_range(-two_days..=two_days);
            posts.push(RawPost {
                id: format!("{}-{:02}", story.key, i + 1),
                source: pick(&mut rng, &SOURCES).to_string(),
                timestamp: center + Duration::seconds(offset),
                text: post_text(&mut rng, story),
            });
        }
    }

    let mut claims = Vec::new();
    for story in &STORIES {
        let n_real = config.claims_per_story / 2;
        let n_fake = config.claims_per_story - n_real;
        for i in 0..config.claims_per_story {
            let offset = rng.random_range(-half_day..=half_day);
            let (label, text) = if i < n_real {
                (Label::Real, aligned_claim(&mut rng, story))
            } else if story.grim && i - n_real >= n_fake / 2 {
                (Label::Fake, minimized_claim(&mut rng, story))
            } else {
                (Label::Fake, flipped_claim(&mut rng, story))
            };
            claims.push(LabeledClaim {
                id: format!("claim-{}-{:02}", story.key, i + 1),
                text,
                timestamp: center + Duration::seconds(offset),
                label,
            });
        }
    }

    SyntheticBenchmark { center, posts, claims }
}

/// RFC 3339 form of the benchmark's week center.
pub fn center_timestamp() -> String {
    format_timestamp(&parse_timestamp(CENTER).expect("valid center"))
}
