//! Story clustering: k-means with k-means++ seeding, silhouette-based choice
//! of k, target assignment and cosine filtering of the matched cluster.
//!
//! Points are dense vectors; the pipeline feeds L2-normalized TF-IDF vectors,
//! on which Euclidean order agrees with cosine order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::vectorizer::{cosine, SparseVector};

pub const RESTARTS: u64 = 10;
pub const MAX_ITERATIONS: usize = 100;
pub const SHIFT_TOLERANCE: f64 = 1e-4;
pub const MAX_K: usize = 10;

pub const DEFAULT_MAX_EVIDENCE: usize = 5;
pub const DEFAULT_RELEVANCE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansModel {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub model: KMeansModel,
    pub labels: Vec<usize>,
}

/// One Lloyd run from a single k-means++ initialization.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydRun {
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    /// Inertia after each centroid update, in iteration order.
    pub inertia_trace: Vec<f64>,
}

impl LloydRun {
    pub fn inertia(&self) -> f64 {
        self.inertia_trace.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StoryClustering {
    pub model: KMeansModel,
    pub labels: Vec<usize>,
    pub silhouette: f64,
}

impl StoryClustering {
    /// Everything in one story, for windows too small to search over k.
    pub fn single(points: &[Vec<f64>], seed: u64) -> Result<Self> {
        let dim = check_dims(points)?;
        if points.is_empty() {
            return Err(Error::TooFewPoints { points: 0, k: 1 });
        }
        let mut centroid = vec![0.0; dim];
        for p in points {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x;
            }
        }
        let n = points.len() as f64;
        centroid.iter_mut().for_each(|c| *c /= n);
        let labels = vec![0; points.len()];
        let centroids = vec![centroid];
        Ok(StoryClustering {
            model: KMeansModel {
                k: 1,
                inertia: inertia(points, &labels, &centroids),
                centroids,
                seed,
            },
            labels,
            silhouette: 0.0,
        })
    }

    pub fn k(&self) -> usize {
        self.model.k
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |&(_, &l)| l == cluster)
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedStory<P> {
    pub cluster_index: usize,
    /// Posts with their cosine to the target, most similar first.
    pub posts: Vec<(P, f64)>,
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dims(points: &[Vec<f64>]) -> Result<usize> {
    let dim = points.first().map_or(0, Vec::len);
    for p in points {
        if p.len() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: p.len(),
            });
        }
    }
    Ok(dim)
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn kmeans_plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let r = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = d2.iter().rposition(|&d| d > 0.0).unwrap_or(n - 1);
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc > r && d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        let c = points[pick].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// Nearest-centroid assignment; any cluster left empty takes the point
/// farthest from its own centroid (among points whose cluster keeps a member).
fn assign_points(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<usize> {
    let k = centroids.len();
    let mut labels = Vec::with_capacity(points.len());
    let mut dists = Vec::with_capacity(points.len());
    for p in points {
        let (j, d) = nearest(p, centroids);
        labels.push(j);
        dists.push(d);
    }
    let mut sizes = vec![0usize; k];
    for &l in &labels {
        sizes[l] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut donor: Option<usize> = None;
        for i in 0..points.len() {
            if sizes[labels[i]] > 1 && donor.is_none_or(|d| dists[i] > dists[d]) {
                donor = Some(i);
            }
        }
        let i = donor.expect("n >= k leaves a cluster with two members");
        sizes[labels[i]] -= 1;
        labels[i] = empty;
        dists[i] = 0.0;
        sizes[empty] = 1;
    }
    labels
}

fn update_centroids(points: &[Vec<f64>], labels: &[usize], k: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        let c = c.max(1) as f64;
        for v in s.iter_mut() {
            *v /= c;
        }
    }
    sums
}

pub fn inertia(points: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points.iter().zip(labels).map(|(p, &l)| sq_dist(p, &centroids[l])).sum()
}

fn validate(points: &[Vec<f64>], k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("k must be at least 2, got {k}")));
    }
    if points.len() < k {
        return Err(Error::TooFewPoints {
            points: points.len(),
            k,
        });
    }
    check_dims(points)
}

/// A single restart: k-means++ seeding from `seed`, then Lloyd iterations.
pub fn lloyd(points: &[Vec<f64>], k: usize, seed: u64) -> Result<LloydRun> {
    let dim = validate(points, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = kmeans_plus_plus(points, k, &mut rng);
    let mut labels: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let next = assign_points(points, &centroids);
        if next == labels {
            break;
        }
        labels = next;
        let updated = update_centroids(points, &labels, k, dim);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = updated;
        let current = inertia(points, &labels, &centroids);
        // a relabeling that gains nothing means reseeding is cycling
        // between equivalent partitions of coincident points
        let stalled = trace.last().is_some_and(|&prev| current >= prev);
        trace.push(current);
        if shift < SHIFT_TOLERANCE || stalled {
            break;
        }
    }
    Ok(LloydRun {
        centroids,
        labels,
        inertia_trace: trace,
    })
}

/// Best of [`RESTARTS`] Lloyd runs seeded `seed..seed + RESTARTS`.
pub fn kmeans_fit(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansFit> {
    validate(points, k)?;
    let runs: Vec<LloydRun> = (0..RESTARTS)
        .into_par_iter()
        .map(|r| lloyd(points, k, seed.wrapping_add(r)))
        .collect::<Result<_>>()?;
    let mut best = &runs[0];
    for run in &runs[1..] {
        if run.inertia() < best.inertia() {
            best = run;
        }
    }
    Ok(KMeansFit {
        model: KMeansModel {
            k,
            centroids: best.centroids.clone(),
            inertia: best.inertia(),
            seed,
        },
        labels: best.labels.clone(),
    })
}

/// Mean silhouette with Euclidean distance; singletons score 0.
pub fn mean_silhouette(points: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    if points.len() != labels.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} points but {} labels",
            points.len(),
            labels.len()
        )));
    }
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::SingleCluster);
    }
    let n = points.len();
    let mut total = 0.0;
    let mut sums = vec![0.0; k];
    for i in 0..n {
        if sizes[labels[i]] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if i != j {
                sums[labels[j]] += sq_dist(&points[i], &points[j]).sqrt();
            }
        }
        let own = labels[i];
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}

/// Fits every k in `[2, min(MAX_K, n - 1)]` and keeps the best mean
/// silhouette, preferring the smaller k on ties.
pub fn select_k(points: &[Vec<f64>], seed: u64) -> Result<StoryClustering> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewPoints { points: n, k: 2 });
    }
    check_dims(points)?;
    let k_max = MAX_K.min(n - 1);
    let candidates: Vec<StoryClustering> = (2..=k_max)
        .into_par_iter()
        .map(|k| {
            let fit = kmeans_fit(points, k, seed)?;
            let silhouette = mean_silhouette(points, &fit.labels)?;
            Ok(StoryClustering {
                model: fit.model,
                labels: fit.labels,
                silhouette,
            })
        })
        .collect::<Result<_>>()?;
    let mut best: Option<StoryClustering> = None;
    for c in candidates {
        if best.as_ref().is_none_or(|b| c.silhouette > b.silhouette) {
            best = Some(c);
        }
    }
    Ok(best.expect("k range is nonempty"))
}

/// Index of the centroid nearest to the target, lowest index on ties.
pub fn assign(clustering: &StoryClustering, target: &SparseVector) -> Result<usize> {
    if target.is_zero() {
        return Err(Error::ZeroTargetVector);
    }
    let dim = clustering.model.centroids.first().map_or(0, Vec::len);
    if target.dim() != dim {
        return Err(Error::DimMismatch {
            left: target.dim(),
            right: dim,
        });
    }
    Ok(nearest(&target.to_dense(), &clustering.model.centroids).0)
}

/// Keeps cluster members with cosine to the target at least `threshold`,
/// most similar first (input order on ties), at most `max_posts` of them.
pub fn filter_relevant<P: Clone>(
    cluster_index: usize,
    members: &[(P, &SparseVector)],
    target: &SparseVector,
    max_posts: usize,
    threshold: f64,
) -> Result<MatchedStory<P>> {
    let mut scored = Vec::with_capacity(members.len());
    for (post, vec) in members {
        let c = cosine(vec, target)?;
        if c >= threshold {
            scored.push((post.clone(), c));
        }
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored.truncate(max_posts);
    if scored.is_empty() {
        return Err(Error::NoRelevantStory);
    }
    Ok(MatchedStory {
        cluster_index,
        posts: scored,
    })
}
