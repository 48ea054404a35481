//! Simulation of a three-tier disaster network: ground users, UAV base
//! stations and a HAPS backhaul anchor.
//!
//! UAVs are placed over hotspot-clustered users with k-means. The DLC-AHN
//! topology clusters the UAVs a second time, parks one head per cluster on
//! a powered landing spot and lets the others relay through it; SLC and CUP
//! are the single-layer benchmarks where every UAV backhauls to the HAPS.
//! Topologies are compared by an energy score (load times distance) across
//! density, UAV-count and head-count sweeps.
//!
//! ```
//! use vhetnet::prelude::*;
//!
//! let scenario = Scenario::generate(&EnvironmentConfig::default(), 2e-4)?;
//! let spec = ClusterSpec::default();
//! let dlc = build_dlc_ahn(&scenario, 6, 1, &spec)?;
//! let slc = build_slc(&scenario, 6, &spec)?;
//!
//! let access = AccessMode::Assigned;
//! let proposed = evaluate_dlc_ahn(&dlc, &scenario, &LoadModel::ue_count(&dlc), access)?;
//! let heads = dlc_exclusion_for(&slc, &dlc)?;
//! let bench = evaluate_benchmark(&slc, &scenario, &LoadModel::ue_count(&slc), access, &heads, false)?;
//! assert!(proposed.total < bench.total);
//! # Ok::<(), vhetnet::Error>(())
//! ```

pub mod cli;
pub mod clustering;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod plot;
pub mod scenario;
pub mod topology;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::clustering::{kmeans, nearest_point_to, ClusterSpec, ClusteringResult};
    pub use crate::energy::{
        dlc_exclusion_for, energy_score, evaluate_benchmark, evaluate_dlc_ahn,
        mean_access_distance, AccessMode, EnergyBreakdown, EnergyReport, LoadModel,
    };
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{Point2, Point3};
    pub use crate::harness::{
        aggregate, run_sweep, AggregateRow, SweepKind, SweepMethod, SweepResult, SweepRow,
        SweepSpec,
    };
    pub use crate::plot::render_svg;
    pub use crate::scenario::{
        extend_population, generate_scenario, EnvironmentConfig, Scenario, UserEquipment,
    };
    pub use crate::topology::{
        associate_ues, build_cup, build_dlc_ahn, build_slc, Method, Role, Topology, UavBs,
    };
}
