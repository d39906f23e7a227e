//! Property checks runnable through a `TestRunner`, so both the proptest
//! suite and the acceptance binary share one definition of each property.

use crosscheck::affect::{EmotionAnalyzer, EmotionLexicon};
use crosscheck::clustering::mean_silhouette;
use crosscheck::corpus::{clean_text, Stopwords, TimeWindow};
use crosscheck::embedding::{semantic_similarity, WordVectorStore};
use crosscheck::vectorizer::{cosine, TfIdfModel};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::{kabul_pipeline, synthetic, ts, KABUL_CLAIM, KABUL_TIME};

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Free text with punctuation, handles, urls and mixed case.
pub fn messy_text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[A-Za-z]{1,8}",
        "[0-9]{1,4}",
        Just("@someone".to_string()),
        Just("https://t.co/abc".to_string()),
        Just("www.example.org/x".to_string()),
        Just("a.b@mail.com".to_string()),
        Just("the".to_string()),
        Just("U.S.".to_string()),
        Just("Kabul's".to_string()),
        "[!?.,;:'\"()-]{1,3}",
        "[éüßñ]{1,3}",
    ];
    prop::collection::vec(piece, 0..14).prop_map(|v| v.join(" "))
}

pub fn cleaning_idempotent() -> Result<(), String> {
    let sw = Stopwords::english();
    run(256, messy_text(), |s| {
        if let Ok(once) = clean_text(&s, &sw) {
            let twice = clean_text(&once.text_cased, &sw).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&twice, &once);
            prop_assert_eq!(once.text_norm.clone(), once.text_cased.to_lowercase());
            for t in &once.tokens {
                prop_assert!(!sw.contains(t));
                prop_assert!(t.chars().all(char::is_alphanumeric));
            }
        }
        Ok(())
    })
}

pub fn window_symmetric() -> Result<(), String> {
    let center = ts("2021-08-26T00:00:00Z");
    run(256, (1u32..10, -20i64 * 86_400..20 * 86_400), |(radius, delta)| {
        let w = TimeWindow::new(center, radius).unwrap();
        let plus = center + chrono::Duration::seconds(delta);
        let minus = center - chrono::Duration::seconds(delta);
        prop_assert_eq!(w.contains(&plus), w.contains(&minus));
        prop_assert_eq!(w.contains(&plus), delta.abs() <= i64::from(radius) * 86_400);
        Ok(())
    })
}

fn entity_docs() -> impl Strategy<Value = Vec<Vec<String>>> {
    prop::collection::vec(prop::collection::vec("[a-e]{1,2}", 0..6), 1..8)
}

pub fn cosine_bounded_symmetric() -> Result<(), String> {
    run(256, entity_docs(), |docs| {
        let Ok(m) = TfIdfModel::fit(&docs) else {
            return Ok(());
        };
        let vecs: Vec<_> = docs.iter().map(|d| m.transform(d)).collect();
        for u in &vecs {
            let n = u.norm();
            prop_assert!(n == 0.0 || (n - 1.0).abs() < 1e-9);
            for v in &vecs {
                let c = cosine(u, v).unwrap();
                prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
                prop_assert_eq!(c, cosine(v, u).unwrap());
            }
        }
        Ok(())
    })
}

pub fn embedding_cosine_bounded_symmetric() -> Result<(), String> {
    let store = WordVectorStore::fixture();
    static WORDS: [&str; 8] = ["killed", "safe", "just", "officials", "storm", "marines", "zzz", "hope"];
    let toks = prop::collection::vec(prop::sample::select(&WORDS[..]), 0..6);
    run(256, (toks.clone(), toks), |(a, b)| {
        let (ea, eb) = (store.embed(&a), store.embed(&b));
        let s = semantic_similarity(&ea, &eb).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
        prop_assert_eq!(s, semantic_similarity(&eb, &ea).unwrap());
        Ok(())
    })
}

pub fn emotion_normalized() -> Result<(), String> {
    let lex = EmotionLexicon::fixture();
    static WORDS: [&str; 9] = [
        "killed", "furious", "panic", "just", "stunning", "storm", "calm", "report", "xyz",
    ];
    run(
        256,
        prop::collection::vec(prop::sample::select(&WORDS[..]), 0..10),
        |toks| {
            let toks: Vec<String> = toks.into_iter().map(str::to_owned).collect();
            let v = lex.profile(&toks);
            prop_assert!(v.0.iter().all(|x| (0.0..=1.0).contains(x)));
            prop_assert!(v.is_zero() || (v.sum() - 1.0).abs() < 1e-12);
            Ok(())
        },
    )
}

/// Document order does not change a term's idf; token order does not change
/// an embedding; relabeling clusters does not change the silhouette.
pub fn permutation_invariant() -> Result<(), String> {
    let store = WordVectorStore::fixture();
    static WORDS: [&str; 6] = ["killed", "safe", "just", "officials", "marines", "hope"];
    run(
        128,
        (
            entity_docs(),
            prop::collection::vec(prop::sample::select(&WORDS[..]), 1..6),
            any::<u64>(),
        ),
        |(docs, toks, salt)| {
            if let Ok(m) = TfIdfModel::fit(&docs) {
                let mut rev = docs.clone();
                rev.reverse();
                let r = TfIdfModel::fit(&rev).unwrap();
                for t in m.terms() {
                    prop_assert!((m.idf(t).unwrap() - r.idf(t).unwrap()).abs() < 1e-15);
                }
            }

            let mut shuffled = toks.clone();
            shuffled.rotate_left((salt % toks.len() as u64) as usize);
            let (a, b) = (store.embed(&toks), store.embed(&shuffled));
            for (x, y) in a.0.iter().zip(&b.0) {
                prop_assert!((x - y).abs() < 1e-12);
            }

            let points: Vec<Vec<f64>> = (0..6)
                .map(|i| vec![(i * 7 % 5) as f64, (salt % 3) as f64 + i as f64])
                .collect();
            let labels = [0, 0, 1, 1, 2, 2];
            let relabeled: Vec<usize> = labels.iter().map(|l| (l + 1) % 3).collect();
            let s1 = mean_silhouette(&points, &labels).unwrap();
            let s2 = mean_silhouette(&points, &relabeled).unwrap();
            prop_assert!((s1 - s2).abs() < 1e-12);
            Ok(())
        },
    )
}

/// Same inputs, same bytes, across independent pipeline builds and thread
/// pools of different sizes.
pub fn verdict_bytes_deterministic() -> Result<(), String> {
    let model = &synthetic().model;
    let time = ts(KABUL_TIME);
    let render = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| kabul_pipeline().check(KABUL_CLAIM, time, model).unwrap().to_json())
    };
    let first = render(1);
    for threads in [1, 2, 4] {
        if render(threads) != first {
            return Err(format!("verdict JSON differs with {threads} threads"));
        }
    }
    let s = synthetic();
    for claim in s.test.iter().take(5) {
        let a = s.pipeline.check(&claim.text, claim.timestamp, model).unwrap().to_json();
        let b = s
            .pipeline
            .clone()
            .check(&claim.text, claim.timestamp, model)
            .unwrap()
            .to_json();
        if a != b {
            return Err(format!("verdict JSON differs for {}", claim.id));
        }
    }
    Ok(())
}
