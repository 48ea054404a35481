//! Network layouts: the two-layer DLC-AHN topology and the SLC and CUP
//! benchmarks, plus user-to-UAV association.
//!
//! DLC-AHN places UAVs at the layer-1 k-means centroids of the users,
//! clusters those UAVs again into `k` groups, elects in each group the UAV
//! nearest the group centroid as head and parks it over the landing spot
//! nearest to it. Non-head UAVs relay to their group's head. SLC keeps the
//! same layer-1 placement but every UAV backhauls straight to the HAPS. CUP
//! puts the UAVs on a circle around the environment center.
//!
//! A parked head keeps serving users: association always runs against the
//! final UAV positions.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans, nearest_point_to, ClusterSpec};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};
use crate::scenario::{Scenario, UserEquipment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "DLC_AHN")]
    DlcAhn,
    #[serde(rename = "SLC")]
    Slc,
    #[serde(rename = "CUP")]
    Cup,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::DlcAhn => "DLC_AHN",
            Method::Slc => "SLC",
            Method::Cup => "CUP",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Head,
    NonHead,
    Standalone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavBs {
    pub id: usize,
    pub position: Point3,
    pub role: Role,
    /// Set iff `role == Head`.
    pub landing_spot: Option<Point2>,
    /// Set iff `role == NonHead`.
    pub head_id: Option<usize>,
}

impl UavBs {
    pub fn standalone(id: usize, position: Point3) -> Self {
        Self {
            id,
            position,
            role: Role::Standalone,
            landing_spot: None,
            head_id: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub method: Method,
    pub uavs: Vec<UavBs>,
    /// UE id to serving UAV id. Serialized as `[ue, uav]` pairs.
    #[serde(with = "association_pairs")]
    pub association: Vec<usize>,
    /// Head count; 1 for the single-layer methods.
    pub second_layer_k: usize,
    /// UAV ground positions before any head was moved to a landing spot.
    pub layer1_positions: Vec<Point2>,
    /// Second-layer cluster of each UAV (DLC-AHN only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_layer_labels: Option<Vec<usize>>,
}

impl Topology {
    pub fn n(&self) -> usize {
        self.uavs.len()
    }

    pub fn heads(&self) -> impl Iterator<Item = &UavBs> {
        self.uavs.iter().filter(|u| u.role == Role::Head)
    }

    pub fn head_ids(&self) -> Vec<usize> {
        self.heads().map(|u| u.id).collect()
    }

    /// Number of UEs served by each UAV.
    pub fn loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.uavs.len()];
        for &uav in &self.association {
            loads[uav] += 1;
        }
        loads
    }

    /// UE ids served by each UAV, ascending.
    pub fn served_sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.uavs.len()];
        for (ue, &uav) in self.association.iter().enumerate() {
            out[uav].push(ue);
        }
        out
    }

    /// Checks role and association invariants against the scenario it was
    /// built from.
    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        let broken = |msg: String| Err(Error::InvalidParameters(msg));
        if self.association.len() != scenario.ues.len() {
            return broken("association does not cover every UE".into());
        }
        for (i, u) in self.uavs.iter().enumerate() {
            if u.id != i {
                return broken(format!("UAV at index {i} has id {}", u.id));
            }
            match (self.method, u.role) {
                (Method::DlcAhn, Role::Head) => {
                    let Some(spot) = u.landing_spot else {
                        return broken(format!("head {i} has no landing spot"));
                    };
                    if u.position.ground() != spot
                        || !scenario.config.landing_spots.contains(&spot)
                    {
                        return broken(format!("head {i} is not on a configured landing spot"));
                    }
                    if u.head_id.is_some() {
                        return broken(format!("head {i} points to another head"));
                    }
                }
                (Method::DlcAhn, Role::NonHead) => {
                    let head = u.head_id.and_then(|h| self.uavs.get(h));
                    if head.is_none_or(|h| h.role != Role::Head) || u.landing_spot.is_some() {
                        return broken(format!("non-head {i} does not resolve to a head"));
                    }
                }
                (Method::Slc | Method::Cup, Role::Standalone) => {
                    if u.head_id.is_some() || u.landing_spot.is_some() {
                        return broken(format!("standalone UAV {i} carries head data"));
                    }
                }
                (m, r) => return broken(format!("role {r:?} is not valid for {m}")),
            }
        }
        let heads = self.heads().count();
        let expected_heads = if self.method == Method::DlcAhn {
            self.second_layer_k
        } else {
            0
        };
        if heads != expected_heads {
            return broken(format!("expected {expected_heads} heads, found {heads}"));
        }
        if associate_ues(&scenario.ues, &self.uavs)? != self.association {
            return broken("association is not nearest-UAV".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_sizes(scenario: &Scenario, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    if n > scenario.ues.len() {
        return Err(Error::InvalidParameters(format!(
            "n = {n} exceeds the {} UEs in the scenario",
            scenario.ues.len()
        )));
    }
    Ok(())
}

/// Layer-1 placement shared by DLC-AHN and SLC: k-means with `k = n` over the
/// UE ground positions.
pub fn layer1_positions(scenario: &Scenario, n: usize, spec: &ClusterSpec) -> Result<Vec<Point2>> {
    check_sizes(scenario, n)?;
    Ok(kmeans(&scenario.ue_positions(), &spec.with_k(n))?.centroids)
}

pub fn build_dlc_ahn(scenario: &Scenario, n: usize, k: usize, spec: &ClusterSpec) -> Result<Topology> {
    check_sizes(scenario, n)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let spots = &scenario.config.landing_spots;
    if spots.is_empty() {
        return Err(Error::NoLandingSpots);
    }

    let ground = layer1_positions(scenario, n, spec)?;
    let layer2 = kmeans(&ground, &spec.with_k(k))?;
    let altitude = scenario.config.uav_altitude;
    let head_altitude = scenario.config.head_altitude();

    let mut uavs: Vec<UavBs> = ground
        .iter()
        .enumerate()
        .map(|(id, p)| UavBs {
            id,
            position: p.at_altitude(altitude),
            role: Role::NonHead,
            landing_spot: None,
            head_id: None,
        })
        .collect();

    for (cluster, members) in layer2.members().iter().enumerate() {
        let member_pos: Vec<Point2> = members.iter().map(|&m| ground[m]).collect();
        let head = members[nearest_point_to(&member_pos, &layer2.centroids[cluster])?];
        let spot = spots[nearest_point_to(spots, &ground[head])?];
        let h = &mut uavs[head];
        h.role = Role::Head;
        h.position = spot.at_altitude(head_altitude);
        h.landing_spot = Some(spot);
        for &m in members.iter().filter(|&&m| m != head) {
            uavs[m].head_id = Some(head);
        }
    }

    let association = associate_ues(&scenario.ues, &uavs)?;
    Ok(Topology {
        method: Method::DlcAhn,
        uavs,
        association,
        second_layer_k: k,
        layer1_positions: ground,
        second_layer_labels: Some(layer2.labels),
    })
}

pub fn build_slc(scenario: &Scenario, n: usize, spec: &ClusterSpec) -> Result<Topology> {
    let ground = layer1_positions(scenario, n, spec)?;
    let altitude = scenario.config.uav_altitude;
    let uavs: Vec<UavBs> = ground
        .iter()
        .enumerate()
        .map(|(id, p)| UavBs::standalone(id, p.at_altitude(altitude)))
        .collect();
    let association = associate_ues(&scenario.ues, &uavs)?;
    Ok(Topology {
        method: Method::Slc,
        uavs,
        association,
        second_layer_k: 1,
        layer1_positions: ground,
        second_layer_labels: None,
    })
}

/// `n` UAVs evenly spaced on a circle of radius
/// `radius_fraction * min(width, height) / 2` around the center, UAV `j` at
/// angle `2πj/n` counter-clockwise from east.
pub fn build_cup(scenario: &Scenario, n: usize, radius_fraction: f64) -> Result<Topology> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    if !(radius_fraction > 0.0 && radius_fraction <= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "radius_fraction must lie in (0, 1], got {radius_fraction}"
        )));
    }
    let cfg = &scenario.config;
    let center = cfg.center();
    let radius = radius_fraction * cfg.width.min(cfg.height) / 2.0;
    let ground: Vec<Point2> = (0..n)
        .map(|j| {
            let angle = TAU * j as f64 / n as f64;
            Point2::new(center.x + radius * angle.cos(), center.y + radius * angle.sin())
        })
        .collect();
    let uavs: Vec<UavBs> = ground
        .iter()
        .enumerate()
        .map(|(id, p)| UavBs::standalone(id, p.at_altitude(cfg.uav_altitude)))
        .collect();
    let association = associate_ues(&scenario.ues, &uavs)?;
    Ok(Topology {
        method: Method::Cup,
        uavs,
        association,
        second_layer_k: 1,
        layer1_positions: ground,
        second_layer_labels: None,
    })
}

/// Maps every UE to the UAV with the nearest ground projection, lowest UAV
/// id on ties. The result is indexed by UE id.
pub fn associate_ues(ues: &[UserEquipment], uavs: &[UavBs]) -> Result<Vec<usize>> {
    if uavs.is_empty() {
        return Err(Error::Empty("UAV list"));
    }
    let ground: Vec<Point2> = uavs.iter().map(|u| u.position.ground()).collect();
    ues.iter()
        .map(|ue| Ok(uavs[nearest_point_to(&ground, &ue.position)?].id))
        .collect()
}

mod association_pairs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(assoc: &[usize], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[usize; 2]> = assoc.iter().enumerate().map(|(ue, &uav)| [ue, uav]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let mut pairs = Vec::<[usize; 2]>::deserialize(d)?;
        pairs.sort_unstable();
        for (i, [ue, _]) in pairs.iter().enumerate() {
            if *ue != i {
                return Err(serde::de::Error::custom(format!(
                    "association pairs must cover UE ids 0..n exactly once (missing or repeated id near {i})"
                )));
            }
        }
        Ok(pairs.into_iter().map(|[_, uav]| uav).collect())
    }
}
