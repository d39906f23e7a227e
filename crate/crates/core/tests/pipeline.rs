mod common;

use chrono::Duration;
use crosscheck::app::{
    check_claim, evaluate, split_train_test, train_pipeline, CorpusStore, LabeledClaim, Outcome, PipelineConfig,
    UnverifiableReason,
};
use crosscheck::features::FeatureExtractor;
use crosscheck::forest::{Label, TrainConfig};
use crosscheck::Error;

use common::*;

fn reason(outcome: Outcome) -> UnverifiableReason {
    match outcome {
        Outcome::Unverifiable { reason } => reason,
        Outcome::Verdict(v) => panic!("expected unverifiable, got {}", v.label),
    }
}

#[test]
fn kabul_window_separates_five_stories() {
    let report = kabul_pipeline().cluster_report(ts(KABUL_TIME)).unwrap().unwrap();
    assert_eq!(report.k, 5);
    assert!(report.silhouette > 0.3, "silhouette {}", report.silhouette);
    let members: usize = report.clusters.iter().map(|c| c.post_ids.len()).sum();
    assert_eq!(members, report.clustered);
    assert!(report.clustered <= report.window_size);
    for c in &report.clusters {
        let prefix = c.post_ids[0].split('-').next().unwrap();
        assert!(
            c.post_ids.iter().all(|id| id.starts_with(prefix)),
            "mixed cluster {:?}",
            c.post_ids
        );
    }
}

#[test]
fn kabul_claim_is_flagged_with_attack_evidence() {
    let outcome = kabul_pipeline()
        .check(KABUL_CLAIM, ts(KABUL_TIME), &synthetic().model)
        .unwrap();
    let v = outcome.verdict().expect("verifiable");
    assert_eq!(v.label, Label::Fake);
    assert!(v.score > 0.5);
    assert!(v.evidence.len() <= PipelineConfig::default().max_evidence);
    assert!(v.evidence.windows(2).all(|w| w[0].cosine >= w[1].cosine));
    for id in TABLE_POSTS {
        assert!(v.evidence.iter().any(|e| e.id == id), "{id} missing");
    }
    assert!(v.matched_cluster.top_entities.iter().any(|e| e.entity == "kabul"));
}

#[test]
fn restating_a_reliable_post_reads_as_real() {
    let s = synthetic();
    let mut real = 0;
    for post in s.bench.posts.iter().step_by(5) {
        let v = s.pipeline.check(&post.text, post.timestamp, &s.model).unwrap();
        if v.verdict().expect("own story is verifiable").label == Label::Real {
            real += 1;
        }
    }
    assert_eq!(real, s.bench.posts.len() / 5);
}

#[test]
fn check_is_deterministic_and_matches_free_function() {
    let s = synthetic();
    let claim = &s.test[3];
    let a = s.pipeline.check(&claim.text, claim.timestamp, &s.model).unwrap();
    let b = s.pipeline.check(&claim.text, claim.timestamp, &s.model).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let c = check_claim(
        &claim.text,
        claim.timestamp,
        s.pipeline.corpus(),
        &s.model,
        &FeatureExtractor::fixture(),
        &PipelineConfig::default(),
    )
    .unwrap();
    assert_eq!(a, c);
}

#[test]
fn outcome_json_is_tagged() {
    let p = kabul_pipeline();
    let model = &synthetic().model;
    let v: serde_json::Value =
        serde_json::from_str(&p.check(KABUL_CLAIM, ts(KABUL_TIME), model).unwrap().to_json()).unwrap();
    assert_eq!(v["status"], "verdict");
    assert_eq!(v["label"], "fake");
    assert_eq!(v["features"]["values"].as_array().unwrap().len(), 12);
    let u: serde_json::Value =
        serde_json::from_str(&p.check("bananas", ts("2020-01-01T00:00:00Z"), model).unwrap().to_json()).unwrap();
    assert_eq!(u["status"], "unverifiable");
    assert_eq!(u["reason"], "EmptyWindow");
}

#[test]
fn every_unverifiable_stage_is_reachable() {
    let model = &synthetic().model;
    let at = ts(KABUL_TIME);
    let kabul = kabul_pipeline();
    assert_eq!(
        reason(kabul.check(KABUL_CLAIM, ts("2021-06-01T00:00:00Z"), model).unwrap()),
        UnverifiableReason::EmptyWindow
    );
    assert_eq!(
        reason(
            pipeline_for(no_entity_store())
                .check("Kabul airport", at, model)
                .unwrap()
        ),
        UnverifiableReason::EmptyVocabulary
    );
    assert_eq!(
        reason(kabul.check("bananas are yellow", at, model).unwrap()),
        UnverifiableReason::ZeroTargetVector
    );
    assert_eq!(
        reason(kabul.check("the and of", at, model).unwrap()),
        UnverifiableReason::ZeroTargetVector
    );
    assert_eq!(
        reason(pipeline_for(diluted_store()).check("Kabul", at, model).unwrap()),
        UnverifiableReason::NoRelevantStory
    );
}

#[test]
fn window_edges_are_inclusive() {
    let p = kabul_pipeline();
    let center = ts(KABUL_TIME);
    let report = p.cluster_report(center).unwrap().unwrap();
    assert_eq!(report.window_start, center - Duration::days(3));
    assert_eq!(report.window_end, center + Duration::days(3));
}

#[test]
fn training_accounts_for_every_claim() {
    let s = synthetic();
    let mut claims = s.train.clone();
    claims.push(LabeledClaim {
        id: "stale".into(),
        text: "Northvale Dam collapsed".into(),
        timestamp: s.bench.center - Duration::days(40),
        label: Label::Fake,
    });
    let (_, report) = train_pipeline(&claims, &s.pipeline, &TrainConfig::with_seed(1)).unwrap();
    assert_eq!(report.n_input, claims.len());
    assert_eq!(report.n_used + report.dropped.len(), report.n_input);
    assert!(report.dropped.iter().any(|d| d.id == "stale"));
    assert_eq!(report.balanced_counts[0], report.balanced_counts[1]);
    assert_eq!(report.training_ids.len(), report.balanced_counts.iter().sum::<usize>());
}

#[test]
fn training_without_verifiable_claims_fails() {
    let s = synthetic();
    let claims: Vec<LabeledClaim> = s
        .train
        .iter()
        .take(6)
        .map(|c| LabeledClaim {
            timestamp: c.timestamp + Duration::days(400),
            ..c.clone()
        })
        .collect();
    let err = train_pipeline(&claims, &s.pipeline, &TrainConfig::with_seed(0)).unwrap_err();
    assert!(matches!(err, Error::NoVerifiableClaims));
}

#[test]
fn split_is_stratified_and_disjoint() {
    let s = synthetic();
    assert_eq!(s.train.len() + s.test.len(), s.bench.claims.len());
    let test_fake = s.test.iter().filter(|c| c.label == Label::Fake).count();
    assert_eq!(test_fake, 20);
    assert!(s.test.iter().all(|t| !s.train.iter().any(|c| c.id == t.id)));
    let (again, _) = split_train_test(&s.bench.claims, 0.2, crosscheck::synthetic::DEFAULT_SEED).unwrap();
    assert_eq!(again, s.train);
}

#[test]
fn evaluation_reports_training_overlap() {
    let s = synthetic();
    let report = evaluate(&s.model, &s.train[..10], &s.pipeline, &s.report.training_ids).unwrap();
    assert!(!report.overlapping_ids.is_empty());
    let clean = evaluate(&s.model, &s.test, &s.pipeline, &s.report.training_ids).unwrap();
    assert!(clean.overlapping_ids.is_empty());
}

#[test]
fn corpus_store_round_trips_through_json() {
    let store = kabul_store();
    let back = CorpusStore::from_json(&store.to_json()).unwrap();
    assert_eq!(back.posts, store.posts);
    let wrong = store
        .to_json()
        .replacen("crosscheck-corpus/1", "crosscheck-corpus/9", 1);
    assert!(matches!(
        CorpusStore::from_json(&wrong),
        Err(Error::SchemaVersionMismatch { .. })
    ));
}
