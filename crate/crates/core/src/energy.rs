//! Energy-score evaluation.
//!
//! A UAV's score is its load times a distance. The access term uses the mean
//! slant distance from the UAV to its users (altitude 0); the backhaul term
//! uses the 3-D distance to the next hop: the head UAV for DLC-AHN non-heads,
//! the HAPS for SLC and CUP. Heads sit on powered landing spots and are left
//! out of DLC-AHN totals. Benchmarks can drop the same UAVs for a like-for-like
//! comparison, or keep everyone (the "-inc" variants).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scenario::Scenario;
use crate::topology::{Method, Role, Topology, UavBs};

/// Load times distance.
pub fn energy_score(load: f64, distance: f64) -> Result<f64> {
    if load.is_nan() || load < 0.0 || distance.is_nan() || distance < 0.0 {
        return Err(Error::InvalidParameters(format!(
            "energy score needs non-negative load and distance, got {load} and {distance}"
        )));
    }
    Ok(load * distance)
}

/// Which users enter a UAV's mean access distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessMode {
    /// Only the users the UAV serves.
    #[default]
    Assigned,
    /// Every user in the scenario.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoadMode {
    /// Load is the number of associated users.
    #[default]
    UeCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadModel {
    pub mode: LoadMode,
    /// Load of each UAV, indexed by UAV id.
    pub loads: Vec<f64>,
}

impl LoadModel {
    pub fn ue_count(topology: &Topology) -> Self {
        Self {
            mode: LoadMode::UeCount,
            loads: topology.loads().into_iter().map(|l| l as f64).collect(),
        }
    }

    /// Every load multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mode: self.mode,
            loads: self.loads.iter().map(|l| l * factor).collect(),
        }
    }

    fn check(&self, topology: &Topology) -> Result<()> {
        if self.loads.len() != topology.n() {
            return Err(Error::InvalidParameters(format!(
                "load model covers {} UAVs, topology has {}",
                self.loads.len(),
                topology.n()
            )));
        }
        if let Some(l) = self.loads.iter().find(|l| l.is_nan() || **l < 0.0) {
            return Err(Error::InvalidParameters(format!("negative load {l}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub uav_id: usize,
    pub load: f64,
    pub access_distance: f64,
    pub backhaul_distance: f64,
    pub score: f64,
    /// Excluded UAVs are reported but left out of the total.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub method: Method,
    pub per_uav: Vec<EnergyBreakdown>,
    pub total: f64,
    pub include_heads: bool,
}

impl EnergyReport {
    fn new(method: Method, per_uav: Vec<EnergyBreakdown>, include_heads: bool) -> Self {
        let total = sum_included(&per_uav);
        Self {
            method,
            per_uav,
            total,
            include_heads,
        }
    }

    /// Total recomputed from the per-UAV breakdowns.
    pub fn recomputed_total(&self) -> f64 {
        sum_included(&self.per_uav)
    }

    pub fn excluded_ids(&self) -> BTreeSet<usize> {
        self.per_uav
            .iter()
            .filter(|b| b.excluded)
            .map(|b| b.uav_id)
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn sum_included(per_uav: &[EnergyBreakdown]) -> f64 {
    per_uav.iter().filter(|b| !b.excluded).map(|b| b.score).sum()
}

/// Mean slant distance from `uav` to a set of ground users. `served` is used
/// in [`AccessMode::Assigned`], `all_ues` in [`AccessMode::All`]. An empty
/// set yields 0.
pub fn mean_access_distance(
    uav: &UavBs,
    served: &[Point2],
    mode: AccessMode,
    all_ues: &[Point2],
) -> f64 {
    let set = match mode {
        AccessMode::Assigned => served,
        AccessMode::All => all_ues,
    };
    if set.is_empty() {
        return 0.0;
    }
    set.iter()
        .map(|p| uav.position.distance_to_ground(p))
        .sum::<f64>()
        / set.len() as f64
}

fn access_distances(topology: &Topology, scenario: &Scenario, mode: AccessMode) -> Vec<f64> {
    let all = scenario.ue_positions();
    topology
        .served_sets()
        .iter()
        .zip(&topology.uavs)
        .map(|(served, uav)| {
            let served: Vec<Point2> = served.iter().map(|&ue| all[ue]).collect();
            mean_access_distance(uav, &served, mode, &all)
        })
        .collect()
}

fn expect_method(topology: &Topology, allowed: &[Method], expected: &str) -> Result<()> {
    if allowed.contains(&topology.method) {
        Ok(())
    } else {
        Err(Error::MethodMismatch {
            expected: expected.into(),
            found: topology.method.to_string(),
        })
    }
}

/// Scores a DLC-AHN topology. Non-heads pay `load * access + load * hop`
/// where the hop is the distance to their head; heads are excluded.
pub fn evaluate_dlc_ahn(
    topology: &Topology,
    scenario: &Scenario,
    loads: &LoadModel,
    access: AccessMode,
) -> Result<EnergyReport> {
    expect_method(topology, &[Method::DlcAhn], "DLC_AHN")?;
    loads.check(topology)?;
    let access_d = access_distances(topology, scenario, access);

    let per_uav = topology
        .uavs
        .iter()
        .map(|uav| {
            let load = loads.loads[uav.id];
            let access_distance = access_d[uav.id];
            let (backhaul_distance, excluded) = match (uav.role, uav.head_id) {
                (Role::NonHead, Some(h)) => {
                    let head = topology.uavs.get(h).ok_or(Error::UnknownUav(h))?;
                    (uav.position.distance(&head.position), false)
                }
                (Role::Head, _) => (uav.position.distance(&scenario.haps_position), true),
                (role, _) => {
                    return Err(Error::InvalidParameters(format!(
                        "UAV {} has role {role:?} without a head",
                        uav.id
                    )))
                }
            };
            let score = energy_score(load, access_distance)? + energy_score(load, backhaul_distance)?;
            Ok(EnergyBreakdown {
                uav_id: uav.id,
                load,
                access_distance,
                backhaul_distance,
                score,
                excluded,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyReport::new(Method::DlcAhn, per_uav, false))
}

/// Scores an SLC or CUP topology: every UAV pays `load * (access + haps)`.
/// UAVs listed in `exclusion` are left out of the total unless
/// `include_heads` is set.
pub fn evaluate_benchmark(
    topology: &Topology,
    scenario: &Scenario,
    loads: &LoadModel,
    access: AccessMode,
    exclusion: &BTreeSet<usize>,
    include_heads: bool,
) -> Result<EnergyReport> {
    expect_method(topology, &[Method::Slc, Method::Cup], "SLC or CUP")?;
    loads.check(topology)?;
    if let Some(&bad) = exclusion.iter().find(|&&id| id >= topology.n()) {
        return Err(Error::UnknownUav(bad));
    }
    let access_d = access_distances(topology, scenario, access);
    let per_uav = topology
        .uavs
        .iter()
        .map(|uav| {
            let load = loads.loads[uav.id];
            let access_distance = access_d[uav.id];
            let backhaul_distance = uav.position.distance(&scenario.haps_position);
            Ok(EnergyBreakdown {
                uav_id: uav.id,
                load,
                access_distance,
                backhaul_distance,
                score: energy_score(load, access_distance + backhaul_distance)?,
                excluded: !include_heads && exclusion.contains(&uav.id),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyReport::new(topology.method, per_uav, include_heads))
}

/// UAVs of a benchmark topology that stand in for the DLC-AHN heads.
///
/// SLC shares DLC-AHN's layer-1 placement, so head ids carry over. For CUP,
/// each head landing spot claims the nearest free CUP UAV, taking
/// (spot, UAV) pairs in ascending ground distance with ties to the lowest
/// UAV id and then the lowest head id.
pub fn dlc_exclusion_for(benchmark: &Topology, dlc: &Topology) -> Result<BTreeSet<usize>> {
    expect_method(dlc, &[Method::DlcAhn], "DLC_AHN")?;
    if benchmark.n() != dlc.n() {
        return Err(Error::InvalidParameters(format!(
            "UAV counts differ: benchmark has {}, DLC-AHN has {}",
            benchmark.n(),
            dlc.n()
        )));
    }
    match benchmark.method {
        Method::Slc => Ok(dlc.head_ids().into_iter().collect()),
        Method::Cup => {
            let heads: Vec<(usize, Point2)> = dlc
                .heads()
                .map(|h| (h.id, h.landing_spot.unwrap_or_else(|| h.position.ground())))
                .collect();
            let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(heads.len() * benchmark.n());
            for (head_id, spot) in &heads {
                for uav in &benchmark.uavs {
                    pairs.push((uav.position.ground().distance(spot), uav.id, *head_id));
                }
            }
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            let mut taken = BTreeSet::new();
            let mut matched_heads = BTreeSet::new();
            for (_, uav, head) in pairs {
                if taken.len() == heads.len() {
                    break;
                }
                if !taken.contains(&uav) && !matched_heads.contains(&head) {
                    taken.insert(uav);
                    matched_heads.insert(head);
                }
            }
            Ok(taken)
        }
        Method::DlcAhn => Err(Error::MethodMismatch {
            expected: "SLC or CUP".into(),
            found: benchmark.method.to_string(),
        }),
    }
}
