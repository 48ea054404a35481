//! Implementation results checked against independent oracles, plus
//! property tests for the clustering, topology and energy invariants.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vhetnet::clustering::inertia;
use vhetnet::prelude::*;

use common::*;

#[test]
fn two_planted_groups_match_exhaustive_optimum() {
    let pts = planted(3, 2, 4, 4.0, 1500.0);
    assert_eq!(pts.len(), 8);
    let r = kmeans(&pts, &ClusterSpec::new(2)).unwrap();
    let oracle = brute_force_inertia(&pts, 2);
    assert!(rel_close(r.inertia, oracle, 1e-9), "{} vs {oracle}", r.inertia);
    // The partition is the planted one.
    assert!(r.labels[..4].iter().all(|&l| l == r.labels[0]));
    assert!(r.labels[4..].iter().all(|&l| l == r.labels[4]));
    assert_ne!(r.labels[0], r.labels[4]);
}

#[test]
fn nearest_uav_association_matches_linear_scan() {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 200.0 / 9e6).unwrap();
    assert_eq!(scenario.ues.len(), 200);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let uavs: Vec<UavBs> = (0..6)
        .map(|id| {
            UavBs::standalone(
                id,
                Point3::new(rng.random_range(0.0..3000.0), rng.random_range(0.0..3000.0), 150.0),
            )
        })
        .collect();
    let ground: Vec<Point2> = uavs.iter().map(|u| u.position.ground()).collect();
    let assoc = associate_ues(&scenario.ues, &uavs).unwrap();
    for (ue, &a) in scenario.ues.iter().zip(&assoc) {
        assert_eq!(a, linear_scan_nearest(&ground, &ue.position));
    }
    let sets: usize = (0..6).map(|u| assoc.iter().filter(|&&a| a == u).count()).sum();
    assert_eq!(sets, 200);
}

#[test]
fn slc_association_matches_linear_scan() {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 3e-4).unwrap();
    let t = build_slc(&scenario, 5, &ClusterSpec::default()).unwrap();
    let ground: Vec<Point2> = t.uavs.iter().map(|u| u.position.ground()).collect();
    for (ue, &a) in scenario.ues.iter().zip(&t.association) {
        assert_eq!(a, linear_scan_nearest(&ground, &ue.position));
    }
}

#[test]
fn cup_exclusion_matches_greedy_oracle() {
    for seed in [1, 5, 9, 13] {
        let env = EnvironmentConfig {
            rng_seed: seed,
            ..EnvironmentConfig::default()
        };
        let scenario = Scenario::generate(&env, 3e-4).unwrap();
        let dlc = build_dlc_ahn(&scenario, 6, 2, &ClusterSpec::default().with_seed(seed)).unwrap();
        let cup = build_cup(&scenario, 6, 1.0).unwrap();
        let uav_ground: Vec<Point2> = cup.uavs.iter().map(|u| u.position.ground()).collect();
        let spots: Vec<Point2> = dlc.heads().map(|h| h.landing_spot.unwrap()).collect();
        let expected: BTreeSet<usize> = greedy_matching_oracle(&uav_ground, &spots).into_iter().collect();
        assert_eq!(dlc_exclusion_for(&cup, &dlc).unwrap(), expected, "seed {seed}");
    }
}

#[test]
fn three_uav_fixture_matches_hand_computation() {
    let (topology, scenario, expected) = dlc_fixture();
    topology.validate(&scenario).unwrap();
    let report =
        evaluate_dlc_ahn(&topology, &scenario, &LoadModel::ue_count(&topology), AccessMode::Assigned)
            .unwrap();
    assert!(rel_close(report.total, expected.total, 1e-12));
    for (b, (score, access)) in report
        .per_uav
        .iter()
        .zip(expected.scores.iter().zip(&expected.access_distances))
    {
        assert!(rel_close(b.access_distance, *access, 1e-12));
        match score {
            Some(s) => {
                assert!(!b.excluded);
                assert!(rel_close(b.score, *s, 1e-12));
            }
            None => assert!(b.excluded),
        }
    }
}

#[test]
fn mean_access_distance_matches_resummation() {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 50.0 / 9e6).unwrap();
    let uav = UavBs::standalone(0, Point3::new(1234.5, 987.6, 150.0));
    let pts = scenario.ue_positions();
    let mut sum = 0.0;
    for p in &pts {
        sum += ((p.x - 1234.5).powi(2) + (p.y - 987.6).powi(2) + 150.0f64.powi(2)).sqrt();
    }
    let oracle = sum / pts.len() as f64;
    let got = mean_access_distance(&uav, &pts, AccessMode::Assigned, &[]);
    assert!(rel_close(got, oracle, 1e-9));
    let got_all = mean_access_distance(&uav, &[], AccessMode::All, &pts);
    assert!(rel_close(got_all, oracle, 1e-9));
}

#[test]
fn exclusion_removes_exactly_that_uav() {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 3e-4).unwrap();
    let t = build_slc(&scenario, 5, &ClusterSpec::default()).unwrap();
    let loads = LoadModel::ue_count(&t);
    let full = evaluate_benchmark(&t, &scenario, &loads, AccessMode::Assigned, &BTreeSet::new(), false)
        .unwrap();
    for id in 0..5 {
        let ex: BTreeSet<usize> = [id].into();
        let part = evaluate_benchmark(&t, &scenario, &loads, AccessMode::Assigned, &ex, false).unwrap();
        let expected = full.total - full.per_uav[id].score;
        assert!(rel_close(part.total, expected, 1e-9));
        assert!(rel_close(part.total, benchmark_total_oracle(&t, &scenario, &ex), 1e-9));
    }
}

#[test]
fn aggregate_matches_two_pass_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let rows: Vec<SweepRow> = (0..10)
        .map(|r| SweepRow {
            method: SweepMethod::Cup,
            delta: 4e-4,
            n: 8,
            k: 1,
            replication: r,
            seed: r as u64,
            total_score: rng.random_range(1e6..1e8),
        })
        .collect();
    let agg = aggregate(&rows, SweepKind::Density).unwrap();
    let totals: Vec<f64> = rows.iter().map(|r| r.total_score).collect();
    let (mean, sd) = two_pass_mean_sd(&totals);
    assert_eq!(agg.len(), 1);
    assert!(rel_close(agg[0].mean_total, mean, 1e-9));
    assert!(rel_close(agg[0].sd_total, sd, 1e-9));
}

#[test]
fn dominance_per_nonhead_and_total() {
    for seed in 1..=5 {
        let env = EnvironmentConfig {
            rng_seed: seed,
            ..EnvironmentConfig::default()
        };
        let scenario = Scenario::generate(&env, 4e-4).unwrap();
        let spec = ClusterSpec::default().with_seed(seed);
        let dlc = build_dlc_ahn(&scenario, 8, 2, &spec).unwrap();
        for u in dlc.uavs.iter().filter(|u| u.role == Role::NonHead) {
            let head = &dlc.uavs[u.head_id.unwrap()];
            assert!(u.position.distance(&head.position) < u.position.distance(&scenario.haps_position));
        }
        let slc = build_slc(&scenario, 8, &spec).unwrap();
        let ex = dlc_exclusion_for(&slc, &dlc).unwrap();
        let e_p = evaluate_dlc_ahn(&dlc, &scenario, &LoadModel::ue_count(&dlc), AccessMode::Assigned)
            .unwrap()
            .total;
        let e_slc =
            evaluate_benchmark(&slc, &scenario, &LoadModel::ue_count(&slc), AccessMode::Assigned, &ex, false)
                .unwrap()
                .total;
        assert!(e_p < e_slc, "seed {seed}: {e_p} >= {e_slc}");
    }
}

#[test]
fn zero_load_uav_contributes_nothing() {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 3e-4).unwrap();
    let t = build_cup(&scenario, 6, 1.0).unwrap();
    let mut loads = LoadModel::ue_count(&t);
    loads.loads[2] = 0.0;
    let r = evaluate_benchmark(&t, &scenario, &loads, AccessMode::Assigned, &BTreeSet::new(), true).unwrap();
    assert_eq!(r.per_uav[2].score, 0.0);
}

fn arb_points(max: usize) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((0.0..3000.0f64, 0.0..3000.0f64), 1..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point2::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kmeans_result_invariants(points in arb_points(60), k in 1usize..6, seed in any::<u64>()) {
        prop_assume!(points.len() >= k);
        let spec = ClusterSpec { k, restarts: 3, rng_seed: seed, ..ClusterSpec::default() };
        let r = kmeans(&points, &spec).unwrap();
        prop_assert_eq!(r.centroids.len(), k);
        prop_assert!(r.labels.iter().all(|&l| l < k));
        prop_assert!(r.members().iter().all(|m| !m.is_empty()));
        let recomputed = inertia(&points, &r.centroids, &r.labels);
        prop_assert!(rel_close(r.inertia, recomputed, 1e-9) || (r.inertia - recomputed).abs() < 1e-9);
        // Relabelling to the nearest centroid cannot do strictly better.
        let nearest: f64 = points
            .iter()
            .map(|p| r.centroids.iter().map(|c| p.distance_squared(c)).fold(f64::INFINITY, f64::min))
            .sum();
        prop_assert!(nearest >= r.inertia - 1e-9 * r.inertia.max(1.0));
        for (p, &l) in points.iter().zip(&r.labels) {
            let best = r.centroids.iter().map(|c| p.distance_squared(c)).fold(f64::INFINITY, f64::min);
            prop_assert!(p.distance_squared(&r.centroids[l]) <= best + 1e-9 * best.max(1.0));
        }
    }

    #[test]
    fn more_restarts_never_hurt(points in arb_points(50), k in 1usize..5, seed in any::<u64>(), r in 1usize..6) {
        prop_assume!(points.len() >= k);
        let base = ClusterSpec { k, restarts: r, rng_seed: seed, ..ClusterSpec::default() };
        let more = ClusterSpec { restarts: r + 1, ..base.clone() };
        prop_assert!(kmeans(&points, &more).unwrap().inertia <= kmeans(&points, &base).unwrap().inertia);
    }

    #[test]
    fn planted_inertia_survives_permutation(seed in any::<u64>(), groups in 2usize..4, shuffle in any::<u64>()) {
        let pts = planted(seed, groups, 8 / groups, 1.0, 1000.0);
        let mut perm = pts.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let a = kmeans(&pts, &ClusterSpec::new(groups)).unwrap();
        let b = kmeans(&perm, &ClusterSpec::new(groups)).unwrap();
        prop_assert!(rel_close(a.inertia, b.inertia, 1e-9));
        prop_assert!(rel_close(a.inertia, brute_force_inertia(&pts, groups), 1e-9));
    }

    #[test]
    fn scenario_stays_inside_and_is_reproducible(
        seed in any::<u64>(),
        hotspots in 1usize..10,
        spread in 10.0..800.0f64,
        density in 1e-6..2e-4f64,
    ) {
        let cfg = EnvironmentConfig { rng_seed: seed, hotspot_count: hotspots, hotspot_spread: spread, ..EnvironmentConfig::default() };
        let s = Scenario::generate(&cfg, density).unwrap();
        prop_assert_eq!(s.ues.len(), (density * 9e6).round() as usize);
        prop_assert!(s.ues.iter().all(|u| cfg.contains(&u.position)));
        prop_assert_eq!(s.to_json().unwrap(), Scenario::generate(&cfg, density).unwrap().to_json().unwrap());
        let bigger = s.extend_population(density * 1.5).unwrap();
        prop_assert_eq!(&bigger.ues[..s.ues.len()], &s.ues[..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn topologies_satisfy_role_invariants(seed in any::<u64>(), n in 1usize..10, k_frac in 0.0..1.0f64) {
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let env = EnvironmentConfig { rng_seed: seed, ..EnvironmentConfig::default() };
        let scenario = Scenario::generate(&env, 1e-4).unwrap();
        let spec = ClusterSpec::default().with_seed(seed);
        let dlc = build_dlc_ahn(&scenario, n, k, &spec).unwrap();
        dlc.validate(&scenario).unwrap();
        let roles = |r: Role| dlc.uavs.iter().filter(|u| u.role == r).count();
        prop_assert_eq!(roles(Role::Head), k);
        prop_assert_eq!(roles(Role::Head) + roles(Role::NonHead), n);
        let labels = dlc.second_layer_labels.clone().unwrap();
        for u in &dlc.uavs {
            if let Some(h) = u.head_id {
                prop_assert_eq!(labels[h], labels[u.id]);
            }
            if u.role == Role::Head {
                let spots = &scenario.config.landing_spots;
                let idx = linear_scan_nearest(spots, &dlc.layer1_positions[u.id]);
                prop_assert_eq!(u.landing_spot, Some(spots[idx]));
            }
        }
        let slc = build_slc(&scenario, n, &spec).unwrap();
        slc.validate(&scenario).unwrap();
        prop_assert_eq!(&slc.layer1_positions, &dlc.layer1_positions);
        build_cup(&scenario, n, 1.0).unwrap().validate(&scenario).unwrap();
    }

    #[test]
    fn energy_totals_scale_linearly(seed in any::<u64>(), factor in 0.01..100.0f64) {
        let env = EnvironmentConfig { rng_seed: seed, ..EnvironmentConfig::default() };
        let scenario = Scenario::generate(&env, 1e-4).unwrap();
        let spec = ClusterSpec::default().with_seed(seed);
        let dlc = build_dlc_ahn(&scenario, 6, 2, &spec).unwrap();
        let cup = build_cup(&scenario, 6, 1.0).unwrap();
        let dl = LoadModel::ue_count(&dlc);
        prop_assert_eq!(dl.loads.iter().sum::<f64>(), scenario.ues.len() as f64);
        let a = evaluate_dlc_ahn(&dlc, &scenario, &dl, AccessMode::Assigned).unwrap().total;
        let b = evaluate_dlc_ahn(&dlc, &scenario, &dl.scaled(factor), AccessMode::Assigned).unwrap().total;
        prop_assert!(rel_close(b, a * factor, 1e-12));
        let ex = dlc_exclusion_for(&cup, &dlc).unwrap();
        let cl = LoadModel::ue_count(&cup);
        let c = evaluate_benchmark(&cup, &scenario, &cl, AccessMode::All, &ex, false).unwrap();
        let d = evaluate_benchmark(&cup, &scenario, &cl.scaled(factor), AccessMode::All, &ex, false).unwrap();
        prop_assert!(rel_close(d.total, c.total * factor, 1e-12));
        let back: EnergyReport = serde_json::from_str(&c.to_json().unwrap()).unwrap();
        prop_assert!(rel_close(back.recomputed_total(), c.total, 1e-9));
    }
}
