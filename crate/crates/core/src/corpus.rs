//! Post ingestion, text cleaning and time-window selection.
//!
//! Cleaning runs a fixed sequence of rules: invalid UTF-8 is replaced at
//! decode time, then URLs, email addresses and `@handles` are removed, then
//! every character that is neither alphanumeric nor whitespace is deleted,
//! the text is split on whitespace and stop words are dropped.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::sync::LazyLock;

use chrono::{DateTime, Duration, SecondsFormat, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static URL_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)(?:https?://|www\.)\S+").expect("valid url regex"));
static EMAIL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+").expect("valid email regex"));
static HANDLE_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").expect("valid handle regex"));

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Serialize instants as RFC 3339 with second precision and a `Z` suffix.
pub(crate) mod rfc3339_secs {
    use chrono::{DateTime, SecondsFormat, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&ts.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_timestamp(&raw).map_err(serde::de::Error::custom)
    }
}

/// Parses an RFC 3339 instant, truncated to whole seconds.
pub fn parse_timestamp(raw: &str) -> std::result::Result<DateTime<Utc>, String> {
    let ts = DateTime::parse_from_rfc3339(raw.trim())
        .map_err(|e| format!("bad timestamp {raw:?}: {e}"))?
        .with_timezone(&Utc);
    Ok(DateTime::from_timestamp(ts.timestamp(), 0).expect("in-range timestamp"))
}

pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub source: String,
    #[serde(with = "rfc3339_secs")]
    pub timestamp: DateTime<Utc>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanPost {
    pub id: String,
    pub source: String,
    #[serde(with = "rfc3339_secs")]
    pub timestamp: DateTime<Utc>,
    pub text: String,
    pub text_cased: String,
    pub text_norm: String,
    pub tokens: Vec<String>,
    /// Lowercased entity strings, a multiset in extraction order.
    pub entities: Vec<String>,
}

/// Output of [`clean_text`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanedText {
    pub text_cased: String,
    pub text_norm: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: BTreeSet<String>,
}

impl Stopwords {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: BTreeSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(Error::InvalidConfig("stopword set is empty".into()));
        }
        Ok(Stopwords { words })
    }

    /// One word per line, `#` starts a comment line.
    pub fn parse(content: &str) -> Result<Self> {
        Self::new(
            content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&decode_lossy(&bytes))
    }

    /// The bundled English function-word list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS).expect("bundled stopword list is valid")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Decodes bytes as UTF-8, substituting U+FFFD for invalid sequences.
pub fn decode_lossy(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

pub fn clean_text(text: &str, stopwords: &Stopwords) -> Result<CleanedText> {
    let text = URL_RE.replace_all(text, " ");
    let text = EMAIL_RE.replace_all(&text, " ");
    let text = HANDLE_RE.replace_all(&text, " ");
    let stripped: String = text
        .chars()
        .filter(|c| c.is_alphanumeric() || c.is_whitespace())
        .collect();

    let kept: Vec<&str> = stripped
        .split_whitespace()
        .filter(|tok| !stopwords.contains(&tok.to_lowercase()))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyAfterCleaning);
    }

    let text_cased = kept.join(" ");
    let text_norm = text_cased.to_lowercase();
    let tokens = text_norm.split(' ').map(str::to_owned).collect();
    Ok(CleanedText {
        text_cased,
        text_norm,
        tokens,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeWindow {
    pub center: DateTime<Utc>,
    pub radius_days: u32,
}

impl TimeWindow {
    pub const DEFAULT_RADIUS_DAYS: u32 = 3;

    pub fn new(center: DateTime<Utc>, radius_days: u32) -> Result<Self> {
        if radius_days == 0 {
            return Err(Error::InvalidConfig("window radius must be positive".into()));
        }
        Ok(TimeWindow { center, radius_days })
    }

    pub fn start(&self) -> DateTime<Utc> {
        self.center - Duration::days(i64::from(self.radius_days))
    }

    pub fn end(&self) -> DateTime<Utc> {
        self.center + Duration::days(i64::from(self.radius_days))
    }

    /// Both endpoints are inclusive.
    pub fn contains(&self, ts: &DateTime<Utc>) -> bool {
        *ts >= self.start() && *ts <= self.end()
    }
}

pub fn select_window<'a>(posts: &'a [CleanPost], window: &TimeWindow) -> Result<Vec<&'a CleanPost>> {
    let selected: Vec<&CleanPost> = posts.iter().filter(|p| window.contains(&p.timestamp)).collect();
    if selected.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(selected)
}

#[derive(Deserialize)]
struct PostLine {
    id: String,
    source: String,
    timestamp: String,
    text: String,
}

/// Parses JSONL posts; line numbers in errors are 1-based.
pub fn parse_posts(content: &str) -> Result<Vec<RawPost>> {
    let mut seen = HashSet::new();
    let mut posts = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PostLine = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let timestamp = parse_timestamp(&rec.timestamp).map_err(|message| Error::Parse { line: line_no, message })?;
        if rec.id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty id".into(),
            });
        }
        if rec.text.trim().is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty text".into(),
            });
        }
        if !seen.insert(rec.id.clone()) {
            return Err(Error::DuplicateId {
                id: rec.id,
                line: line_no,
            });
        }
        posts.push(RawPost {
            id: rec.id,
            source: rec.source,
            timestamp,
            text: rec.text,
        });
    }
    Ok(posts)
}

pub fn load_posts(path: impl AsRef<Path>) -> Result<Vec<RawPost>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_posts(&decode_lossy(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> DateTime<Utc> {
        parse_timestamp(s).unwrap()
    }

    fn post_at(id: &str, when: &str) -> CleanPost {
        CleanPost {
            id: id.into(),
            source: "BBC".into(),
            timestamp: ts(when),
            text: "x".into(),
            text_cased: "x".into(),
            text_norm: "x".into(),
            tokens: vec!["x".into()],
            entities: vec![],
        }
    }

    #[test]
    fn loads_three_lines_in_order() {
        let content = r#"{"id":"a","source":"BBC","timestamp":"2021-08-26T12:00:00Z","text":"x"}
{"id":"b","source":"AP","timestamp":"2021-08-26T13:00:00Z","text":"y"}
{"id":"c","source":"CNN","timestamp":"2021-08-26T14:00:00+02:00","text":"z"}"#;
        let posts = parse_posts(content).unwrap();
        let ids: Vec<_> = posts.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(posts[0].timestamp, ts("2021-08-26T12:00:00Z"));
        assert_eq!(posts[0].source, "BBC");
        assert_eq!(posts[2].timestamp, ts("2021-08-26T12:00:00Z"));
    }

    #[test]
    fn duplicate_id_names_second_line() {
        let content = r#"{"id":"a","source":"BBC","timestamp":"2021-08-26T12:00:00Z","text":"x"}
{"id":"a","source":"BBC","timestamp":"2021-08-26T12:00:00Z","text":"y"}"#;
        match parse_posts(content) {
            Err(Error::DuplicateId { id, line }) => {
                assert_eq!(id, "a");
                assert_eq!(line, 2);
            }
            other => panic!("expected DuplicateId, got {other:?}"),
        }
    }

    #[test]
    fn bad_json_and_bad_timestamp_report_line() {
        let content =
            "{\"id\":\"a\",\"source\":\"s\",\"timestamp\":\"2021-08-26T12:00:00Z\",\"text\":\"x\"}\n{not json";
        assert!(matches!(parse_posts(content), Err(Error::Parse { line: 2, .. })));
        let content = r#"{"id":"a","source":"s","timestamp":"yesterday","text":"x"}"#;
        assert!(matches!(parse_posts(content), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn invalid_utf8_is_replaced_then_stripped() {
        let mut bytes = br#"{"id":"a","source":"s","timestamp":"2021-08-26T12:00:00Z","text":"Kab"#.to_vec();
        bytes.push(0xff);
        bytes.extend_from_slice(br#"ul news"}"#);
        let posts = parse_posts(&decode_lossy(&bytes)).unwrap();
        assert!(posts[0].text.contains('\u{FFFD}'));
        let sw = Stopwords::new(["the"]).unwrap();
        let cleaned = clean_text(&posts[0].text, &sw).unwrap();
        assert_eq!(cleaned.text_cased, "Kabul news");
    }

    #[test]
    fn clean_applies_rules_in_order() {
        let sw = Stopwords::new(["the", "check"]).unwrap();
        let c = clean_text("Check https://t.co/x @BBC the UN attack!", &sw).unwrap();
        assert_eq!(c.text_cased, "UN attack");
        assert_eq!(c.text_norm, "un attack");
        assert_eq!(c.tokens, ["un", "attack"]);
    }

    #[test]
    fn clean_without_rules_firing() {
        let sw = Stopwords::new(["the"]).unwrap();
        let c = clean_text("hello", &sw).unwrap();
        assert_eq!(c.text_cased, "hello");
        assert_eq!(c.tokens, ["hello"]);
    }

    #[test]
    fn clean_everything_removed() {
        let sw = Stopwords::new(["the"]).unwrap();
        assert!(matches!(
            clean_text("@user http://a.b", &sw),
            Err(Error::EmptyAfterCleaning)
        ));
    }

    #[test]
    fn emails_and_www_urls_removed() {
        let sw = Stopwords::new(["the"]).unwrap();
        let c = clean_text("mail desk@news.example.org or see www.example.com today", &sw).unwrap();
        assert_eq!(c.tokens, ["mail", "or", "see", "today"]);
    }

    #[test]
    fn apostrophes_merge_and_numerals_stay() {
        let sw = Stopwords::english();
        let c = clean_text("At least 12 killed at Kabul's airport", &sw).unwrap();
        assert_eq!(c.text_cased, "least 12 killed Kabuls airport");
    }

    #[test]
    fn bundled_stopwords() {
        let sw = Stopwords::english();
        assert!(sw.len() > 150);
        assert!(sw.contains("the"));
        assert!(!sw.contains("us"));
        assert!(!sw.contains("just"));
        assert!(Stopwords::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn window_bounds_are_inclusive() {
        let w = TimeWindow::new(ts("2021-08-26T00:00:00Z"), 3).unwrap();
        let posts = vec![
            post_at("in-start", "2021-08-23T00:00:00Z"),
            post_at("before", "2021-08-22T23:59:59Z"),
            post_at("in-end", "2021-08-29T00:00:00Z"),
            post_at("after", "2021-08-29T00:00:01Z"),
        ];
        let ids: Vec<_> = select_window(&posts, &w)
            .unwrap()
            .iter()
            .map(|p| p.id.as_str())
            .collect();
        assert_eq!(ids, ["in-start", "in-end"]);
    }

    #[test]
    fn empty_window() {
        let w = TimeWindow::new(ts("2021-08-26T00:00:00Z"), 3).unwrap();
        assert!(matches!(select_window(&[], &w), Err(Error::EmptyWindow)));
        assert!(TimeWindow::new(ts("2021-08-26T00:00:00Z"), 0).is_err());
    }
}
