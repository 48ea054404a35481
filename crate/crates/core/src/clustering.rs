//! Lloyd's k-means over ground-plane points with k-means++ seeding and
//! best-of-n restarts. Both clustering layers (UAV placement over users and
//! head election over UAVs) run through [`kmeans`].
//!
//! Nearest-centroid ties always go to the lowest centroid index. Restart `r`
//! draws from ChaCha8 stream `r` of `rng_seed`, so the result does not depend
//! on how restarts are scheduled and adding restarts never worsens it.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSpec {
    pub k: usize,
    pub max_iterations: usize,
    /// Lloyd stops once no centroid moves farther than this (meters).
    pub tolerance: f64,
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for ClusterSpec {
    fn default() -> Self {
        Self {
            k: 1,
            max_iterations: 300,
            tolerance: 1e-6,
            restarts: 8,
            rng_seed: 0,
        }
    }
}

impl ClusterSpec {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    pub fn with_k(&self, k: usize) -> Self {
        Self { k, ..self.clone() }
    }

    pub fn with_seed(&self, rng_seed: u64) -> Self {
        Self {
            rng_seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameters("k must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameters(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "tolerance must be non-negative, got {}",
                self.tolerance
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameters(
                "restarts must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub centroids: Vec<Point2>,
    /// Cluster index of each input point.
    pub labels: Vec<usize>,
    /// Sum of squared distances from each point to its assigned centroid.
    pub inertia: f64,
    /// Lloyd iterations run by the winning restart.
    pub iterations: usize,
}

impl ClusteringResult {
    /// Point indices grouped by cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.centroids.len()];
        for (i, &label) in self.labels.iter().enumerate() {
            out[label].push(i);
        }
        out
    }
}

/// Clusters `points` into `spec.k` groups.
pub fn kmeans(points: &[Point2], spec: &ClusterSpec) -> Result<ClusteringResult> {
    spec.validate()?;
    if points.is_empty() {
        return Err(Error::Empty("point list"));
    }
    if points.len() < spec.k {
        return Err(Error::InsufficientPoints {
            k: spec.k,
            points: points.len(),
        });
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::InvalidParameters(format!("point {i} is not finite")));
    }

    let runs: Vec<ClusteringResult> = (0..spec.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
            rng.set_stream(restart as u64);
            lloyd(points, spec, &mut rng)
        })
        .collect();

    // First restart wins ties so the answer matches a sequential scan.
    let best = runs
        .into_iter()
        .reduce(|best, run| if run.inertia < best.inertia { run } else { best })
        .expect("restarts >= 1");
    Ok(best)
}

/// Index of the point closest to `target`, lowest index on ties.
pub fn nearest_point_to(points: &[Point2], target: &Point2) -> Result<usize> {
    nearest(points, target)
        .map(|(i, _)| i)
        .ok_or(Error::Empty("point list"))
}

/// Recomputes the k-means objective for given centroids and labels.
pub fn inertia(points: &[Point2], centroids: &[Point2], labels: &[usize]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| p.distance_squared(&centroids[l]))
        .sum()
}

fn nearest(points: &[Point2], target: &Point2) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        let d = p.distance_squared(target);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best
}

fn lloyd(points: &[Point2], spec: &ClusterSpec, rng: &mut ChaCha8Rng) -> ClusteringResult {
    let k = spec.k;
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut labels = vec![0usize; points.len()];
    let mut iterations = 0;

    while iterations < spec.max_iterations {
        iterations += 1;
        assign(points, &mut centroids, &mut labels);
        let updated = means(points, &labels, &centroids);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max);
        centroids = updated;
        if shift <= spec.tolerance {
            break;
        }
    }

    // Labels must be nearest with respect to the centroids we return.
    assign(points, &mut centroids, &mut labels);
    ClusteringResult {
        inertia: inertia(points, &centroids, &labels),
        centroids,
        labels,
        iterations,
    }
}

/// k-means++: first centroid uniform, each next one drawn with probability
/// proportional to the squared distance to the nearest chosen centroid.
fn seed_plus_plus(points: &[Point2], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let mut chosen = vec![rng.random_range(0..points.len())];
    let mut weights: Vec<f64> = points
        .iter()
        .map(|p| p.distance_squared(&points[chosen[0]]))
        .collect();
    while chosen.len() < k {
        let next = match WeightedIndex::new(&weights) {
            Ok(dist) => dist.sample(rng),
            // Every point coincides with a chosen centroid.
            Err(_) => {
                let unused: Vec<usize> =
                    (0..points.len()).filter(|i| !chosen.contains(i)).collect();
                unused[rng.random_range(0..unused.len())]
            }
        };
        chosen.push(next);
        for (w, p) in weights.iter_mut().zip(points) {
            *w = w.min(p.distance_squared(&points[next]));
        }
    }
    chosen.into_iter().map(|i| points[i]).collect()
}

/// Nearest-centroid assignment followed by empty-cluster repair: an empty
/// cluster takes over the point farthest from its current centroid, and
/// its centroid moves onto that point.
fn assign(points: &[Point2], centroids: &mut [Point2], labels: &mut [usize]) {
    let k = centroids.len();
    // Each pass fills at least one empty cluster unless a point is stolen
    // back; the bound only guards against pathological oscillation.
    for _ in 0..=k {
        for (label, p) in labels.iter_mut().zip(points) {
            *label = nearest(centroids, p).expect("k >= 1").0;
        }
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = farthest_movable(points, centroids, labels, &sizes);
        centroids[empty] = points[donor];
        if points[donor].distance_squared(&centroids[labels[donor]]) == 0.0 {
            // Duplicate points: the donor is tied between two centroids, so
            // give it to the empty one without another nearest pass.
            labels[donor] = empty;
            fill_remaining_by_ties(points, centroids, labels);
            return;
        }
    }
    fill_remaining_by_ties(points, centroids, labels);
}

/// Point farthest from its centroid among clusters with more than one member.
fn farthest_movable(
    points: &[Point2],
    centroids: &[Point2],
    labels: &[usize],
    sizes: &[usize],
) -> usize {
    let mut best = (usize::MAX, -1.0);
    for (i, (p, &l)) in points.iter().zip(labels).enumerate() {
        if sizes[l] < 2 {
            continue;
        }
        let d = p.distance_squared(&centroids[l]);
        if d > best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Last resort for heavily duplicated inputs: move one member of an
/// oversized cluster into each still-empty cluster, placing that centroid
/// on the moved point.
fn fill_remaining_by_ties(points: &[Point2], centroids: &mut [Point2], labels: &mut [usize]) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = farthest_movable(points, centroids, labels, &sizes);
        centroids[empty] = points[donor];
        labels[donor] = empty;
    }
}

fn means(points: &[Point2], labels: &[usize], previous: &[Point2]) -> Vec<Point2> {
    let k = previous.len();
    let mut sums = vec![(0.0, 0.0, 0usize); k];
    for (p, &l) in points.iter().zip(labels) {
        let s = &mut sums[l];
        s.0 += p.x;
        s.1 += p.y;
        s.2 += 1;
    }
    sums.iter()
        .zip(previous)
        .map(|(&(sx, sy, n), prev)| {
            if n == 0 {
                *prev
            } else {
                Point2::new(sx / n as f64, sy / n as f64)
            }
        })
        .collect()
}
