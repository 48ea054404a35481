#![allow(dead_code)]

use serde::Deserialize;
use vhetnet::prelude::*;

/// Exhaustive k-means optimum: every labeling of `points` into `k`
/// non-empty clusters, each scored against its own means.
pub fn brute_force_inertia(points: &[Point2], k: usize) -> f64 {
    let m = points.len();
    let mut labels = vec![0usize; m];
    let mut best = f64::INFINITY;
    loop {
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &l) in points.iter().zip(&labels) {
            sums[l].0 += p.x;
            sums[l].1 += p.y;
            sums[l].2 += 1;
        }
        if sums.iter().all(|s| s.2 > 0) {
            let cost: f64 = points
                .iter()
                .zip(&labels)
                .map(|(p, &l)| {
                    let (sx, sy, c) = sums[l];
                    let (mx, my) = (sx / c as f64, sy / c as f64);
                    (p.x - mx).powi(2) + (p.y - my).powi(2)
                })
                .sum();
            best = best.min(cost);
        }
        // Odometer increment over k^m labelings.
        let mut i = 0;
        loop {
            if i == m {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Planted instance: `groups` tight clusters of `per_group` points, spread
/// `spread` around centers at least `gap` apart.
pub fn planted(seed: u64, groups: usize, per_group: usize, spread: f64, gap: f64) -> Vec<Point2> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    for g in 0..groups {
        let cx = g as f64 * gap + rng.random_range(0.0..gap * 0.1);
        let cy = (g % 2) as f64 * gap * 0.5 + rng.random_range(0.0..gap * 0.1);
        for _ in 0..per_group {
            pts.push(Point2::new(
                cx + rng.random_range(-spread..spread),
                cy + rng.random_range(-spread..spread),
            ));
        }
    }
    pts
}

/// Nearest index by plain linear scan with explicit Euclidean distance.
pub fn linear_scan_nearest(candidates: &[Point2], target: &Point2) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in candidates.iter().enumerate() {
        let d = ((c.x - target.x).powi(2) + (c.y - target.y).powi(2)).sqrt();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Greedy matching by repeated full scans: each round picks the globally
/// closest unmatched (UAV, head) pair, ties to lower UAV id then head id.
pub fn greedy_matching_oracle(uavs: &[Point2], heads: &[Point2]) -> Vec<usize> {
    let mut used_uav = vec![false; uavs.len()];
    let mut used_head = vec![false; heads.len()];
    let mut picked = Vec::new();
    for _ in 0..heads.len() {
        let mut best: Option<(f64, usize, usize)> = None;
        for (u, up) in uavs.iter().enumerate() {
            for (h, hp) in heads.iter().enumerate() {
                if used_uav[u] || used_head[h] {
                    continue;
                }
                let d = ((up.x - hp.x).powi(2) + (up.y - hp.y).powi(2)).sqrt();
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, u, h));
                }
            }
        }
        let (_, u, h) = best.expect("enough UAVs");
        used_uav[u] = true;
        used_head[h] = true;
        picked.push(u);
    }
    picked.sort_unstable();
    picked
}

/// Benchmark total re-summed from scratch: every UE's slant distance to its
/// UAV, every UAV's distance to the HAPS, skipping excluded ids.
pub fn benchmark_total_oracle(
    topology: &Topology,
    scenario: &Scenario,
    excluded: &std::collections::BTreeSet<usize>,
) -> f64 {
    let haps = scenario.haps_position;
    let mut total = 0.0;
    for uav in &topology.uavs {
        if excluded.contains(&uav.id) {
            continue;
        }
        let p = uav.position;
        let mut load = 0.0;
        let mut dist_sum = 0.0;
        for (ue, &serving) in scenario.ues.iter().zip(&topology.association) {
            if serving == uav.id {
                load += 1.0;
                dist_sum += ((p.x - ue.position.x).powi(2)
                    + (p.y - ue.position.y).powi(2)
                    + p.z.powi(2))
                .sqrt();
            }
        }
        if load > 0.0 {
            let backhaul =
                ((p.x - haps.x).powi(2) + (p.y - haps.y).powi(2) + (p.z - haps.z).powi(2)).sqrt();
            total += load * (dist_sum / load + backhaul);
        }
    }
    total
}

/// Mean and population standard deviation in two passes.
pub fn two_pass_mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[derive(Deserialize)]
pub struct Expected {
    pub scores: Vec<Option<f64>>,
    pub access_distances: Vec<f64>,
    pub total: f64,
}

#[derive(Deserialize)]
pub struct DlcFixture {
    pub uavs: Vec<UavBs>,
    pub ues: Vec<Point2>,
    pub association: Vec<usize>,
    pub expected: Expected,
}

/// The committed three-UAV DLC-AHN case as a topology plus scenario.
pub fn dlc_fixture() -> (Topology, Scenario, Expected) {
    let text = include_str!("../fixtures/dlc_three_uav.json");
    let fx: DlcFixture = serde_json::from_str(text).expect("fixture parses");
    let config = EnvironmentConfig::default();
    let ues: Vec<UserEquipment> = fx
        .ues
        .iter()
        .enumerate()
        .map(|(id, &position)| UserEquipment { id, position })
        .collect();
    let scenario = Scenario {
        user_density: ues.len() as f64 / config.area(),
        haps_position: config.haps_position(),
        hotspot_centers: vec![],
        config,
        ues,
    };
    let topology = Topology {
        method: Method::DlcAhn,
        layer1_positions: fx.uavs.iter().map(|u| u.position.ground()).collect(),
        uavs: fx.uavs,
        association: fx.association,
        second_layer_k: 1,
        second_layer_labels: Some(vec![0, 0, 0]),
    };
    (topology, scenario, fx.expected)
}
