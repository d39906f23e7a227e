//! Training and evaluation over labeled claims.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{balance_by, class_counts, LabeledClaim};
use super::pipeline::{Pipeline, UnverifiableReason};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::forest::{Label, RandomForestModel, TrainConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedClaim {
    pub id: String,
    pub reason: UnverifiableReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingReport {
    pub n_input: usize,
    pub n_used: usize,
    pub dropped: Vec<DroppedClaim>,
    /// Verifiable claims per class, `[fake, real]`.
    pub verifiable_counts: [usize; 2],
    /// Class counts after balancing, what the forest actually saw.
    pub balanced_counts: [usize; 2],
    pub training_ids: Vec<String>,
    pub training_accuracy: f64,
}

/// Verifiable claims paired with their features.
pub type FeaturedClaims = Vec<(LabeledClaim, FeatureVector)>;

/// Features of each verifiable claim, in input order, plus the dropped ones.
pub fn claim_features(claims: &[LabeledClaim], pipeline: &Pipeline) -> Result<(FeaturedClaims, Vec<DroppedClaim>)> {
    let staged: Vec<_> = claims
        .par_iter()
        .map(|c| pipeline.analyze(&c.text, c.timestamp))
        .collect::<Result<_>>()?;
    let mut used = Vec::new();
    let mut dropped = Vec::new();
    for (claim, outcome) in claims.iter().zip(staged) {
        match outcome {
            Ok(a) => used.push((claim.clone(), a.features)),
            Err(reason) => dropped.push(DroppedClaim {
                id: claim.id.clone(),
                reason,
            }),
        }
    }
    Ok((used, dropped))
}

/// Extracts features, drops unverifiable claims, balances the classes with
/// the config seed and fits the forest.
pub fn train_pipeline(
    claims: &[LabeledClaim],
    pipeline: &Pipeline,
    config: &TrainConfig,
) -> Result<(RandomForestModel, TrainingReport)> {
    let (used, dropped) = claim_features(claims, pipeline)?;
    if used.is_empty() {
        return Err(Error::NoVerifiableClaims);
    }
    let verifiable_counts = class_counts(&used, |(c, _)| c.label);
    let balanced = balance_by(&used, |(c, _)| c.label, config.seed)?;
    let x: Vec<FeatureVector> = balanced.iter().map(|(_, f)| f.clone()).collect();
    let y: Vec<Label> = balanced.iter().map(|(c, _)| c.label).collect();
    let model = RandomForestModel::fit_features(&x, &y, config)?;
    let correct = x
        .iter()
        .zip(&y)
        .map(|(f, &label)| model.predict(f).map(|p| p.label == label))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&ok| ok)
        .count();
    let report = TrainingReport {
        n_input: claims.len(),
        n_used: used.len(),
        dropped,
        verifiable_counts,
        balanced_counts: class_counts(&y, |&l| l),
        training_ids: balanced.iter().map(|(c, _)| c.id.clone()).collect(),
        training_accuracy: correct as f64 / y.len() as f64,
    };
    Ok((model, report))
}

/// Confusion counts with fake as the positive class. Ratios with a zero
/// denominator are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl Metrics {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        Metrics {
            tp,
            fp,
            fn_,
            tn,
            accuracy: ratio(tp + tn, tp + fp + fn_ + tn),
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Self {
        let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
        for (truth, predicted) in pairs {
            match (truth, predicted) {
                (Label::Fake, Label::Fake) => tp += 1,
                (Label::Real, Label::Fake) => fp += 1,
                (Label::Fake, Label::Real) => fn_ += 1,
                (Label::Real, Label::Real) => tn += 1,
            }
        }
        Self::from_counts(tp, fp, fn_, tn)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub metrics: Metrics,
    pub unverifiable: Vec<DroppedClaim>,
    /// Evaluated claim ids that the model was trained on.
    pub overlapping_ids: Vec<String>,
}

pub fn evaluate(
    model: &RandomForestModel,
    claims: &[LabeledClaim],
    pipeline: &Pipeline,
    training_ids: &[String],
) -> Result<EvaluationReport> {
    let (used, unverifiable) = claim_features(claims, pipeline)?;
    if used.is_empty() {
        return Err(Error::NoVerifiableClaims);
    }
    let mut pairs = Vec::with_capacity(used.len());
    for (claim, f) in &used {
        pairs.push((claim.label, model.predict(f)?.label));
    }
    let known: HashSet<&str> = training_ids.iter().map(String::as_str).collect();
    let overlapping_ids = claims
        .iter()
        .filter(|c| known.contains(c.id.as_str()))
        .map(|c| c.id.clone())
        .collect();
    Ok(EvaluationReport {
        metrics: Metrics::from_pairs(pairs),
        unverifiable,
        overlapping_ids,
    })
}
