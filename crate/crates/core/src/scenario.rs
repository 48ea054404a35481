//! Reproducible disaster scenarios: the service area, a hotspot-clustered
//! user population and the powered landing spots.
//!
//! Randomness comes from ChaCha8 seeded with [`EnvironmentConfig::rng_seed`].
//! Stream 0 draws the hotspot centers; user `i` draws from stream `i + 1`.
//! A user's position therefore depends only on the seed and its index, which
//! is what lets [`Scenario::extend_population`] append users without touching
//! the existing ones.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};

/// Rejection sampling gives up after this many draws and clamps instead.
const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub width: f64,
    pub height: f64,
    pub haps_altitude: f64,
    pub uav_altitude: f64,
    /// Altitude of a head UAV parked over its landing spot. `None` keeps the
    /// regular `uav_altitude`; `Some(0.0)` models a landed head.
    pub head_altitude: Option<f64>,
    pub landing_spots: Vec<Point2>,
    pub hotspot_count: usize,
    /// Standard deviation of each hotspot's isotropic Gaussian.
    pub hotspot_spread: f64,
    pub rng_seed: u64,
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        let (width, height) = (3000.0, 3000.0);
        Self {
            width,
            height,
            haps_altitude: 20_000.0,
            uav_altitude: 150.0,
            head_altitude: None,
            landing_spots: quadrant_centers(width, height),
            hotspot_count: 6,
            hotspot_spread: 150.0,
            rng_seed: 42,
        }
    }
}

/// Centers of the four quadrants of a `width` x `height` rectangle.
pub fn quadrant_centers(width: f64, height: f64) -> Vec<Point2> {
    vec![
        Point2::new(width * 0.25, height * 0.25),
        Point2::new(width * 0.75, height * 0.25),
        Point2::new(width * 0.25, height * 0.75),
        Point2::new(width * 0.75, height * 0.75),
    ]
}

impl EnvironmentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.width.is_finite() && self.width > 0.0) {
            return bad(format!("width must be positive, got {}", self.width));
        }
        if !(self.height.is_finite() && self.height > 0.0) {
            return bad(format!("height must be positive, got {}", self.height));
        }
        if !(self.uav_altitude.is_finite() && self.uav_altitude > 0.0) {
            return bad(format!(
                "uav_altitude must be positive, got {}",
                self.uav_altitude
            ));
        }
        if !(self.haps_altitude.is_finite() && self.haps_altitude > self.uav_altitude) {
            return bad(format!(
                "haps_altitude ({}) must exceed uav_altitude ({})",
                self.haps_altitude, self.uav_altitude
            ));
        }
        if let Some(h) = self.head_altitude {
            if !(h.is_finite() && h >= 0.0 && h < self.haps_altitude) {
                return bad(format!(
                    "head_altitude must lie in [0, haps_altitude), got {h}"
                ));
            }
        }
        if self.hotspot_count == 0 {
            return bad("hotspot_count must be at least 1".into());
        }
        if !(self.hotspot_spread.is_finite() && self.hotspot_spread > 0.0) {
            return bad(format!(
                "hotspot_spread must be positive, got {}",
                self.hotspot_spread
            ));
        }
        for (i, spot) in self.landing_spots.iter().enumerate() {
            if !self.contains(spot) {
                return bad(format!(
                    "landing spot {i} at ({}, {}) lies outside the environment",
                    spot.x, spot.y
                ));
            }
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.width / 2.0, self.height / 2.0)
    }

    pub fn haps_position(&self) -> Point3 {
        self.center().at_altitude(self.haps_altitude)
    }

    pub fn head_altitude(&self) -> f64 {
        self.head_altitude.unwrap_or(self.uav_altitude)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.is_finite() && (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    /// Number of users a density yields over this area.
    pub fn ue_count(&self, density: f64) -> usize {
        (density * self.area()).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserEquipment {
    pub id: usize,
    pub position: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub config: EnvironmentConfig,
    /// Users per square meter.
    pub user_density: f64,
    pub haps_position: Point3,
    pub hotspot_centers: Vec<Point2>,
    pub ues: Vec<UserEquipment>,
}

impl Scenario {
    /// Draws a fresh scenario. Identical inputs give identical output.
    pub fn generate(config: &EnvironmentConfig, density: f64) -> Result<Self> {
        config.validate()?;
        let count = checked_count(config, density)?;
        let hotspot_centers = hotspot_centers(config);
        let ues = (0..count)
            .map(|id| sample_ue(config, &hotspot_centers, id))
            .collect();
        Ok(Self {
            config: config.clone(),
            user_density: density,
            haps_position: config.haps_position(),
            hotspot_centers,
            ues,
        })
    }

    /// Raises the density by appending users. Existing users are untouched
    /// and the result equals `generate(config, new_density)`.
    pub fn extend_population(&self, new_density: f64) -> Result<Self> {
        if new_density.is_nan() || new_density < self.user_density {
            return Err(Error::InvalidDensity {
                density: new_density,
                reason: format!(
                    "cannot shrink the population below the current density {}",
                    self.user_density
                ),
            });
        }
        let count = checked_count(&self.config, new_density)?;
        let mut out = self.clone();
        out.user_density = new_density;
        let start = out.ues.len();
        out.ues
            .extend((start..count).map(|id| sample_ue(&self.config, &self.hotspot_centers, id)));
        Ok(out)
    }

    pub fn ue_positions(&self) -> Vec<Point2> {
        self.ues.iter().map(|ue| ue.position).collect()
    }

    /// Checks the structural invariants of a scenario loaded from disk.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let expected = checked_count(&self.config, self.user_density)?;
        if self.ues.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "scenario holds {} UEs but density {} implies {expected}",
                self.ues.len(),
                self.user_density
            )));
        }
        for (i, ue) in self.ues.iter().enumerate() {
            if ue.id != i {
                return Err(Error::InvalidConfig(format!(
                    "UE at index {i} carries id {}",
                    ue.id
                )));
            }
            if !self.config.contains(&ue.position) {
                return Err(Error::InvalidConfig(format!(
                    "UE {i} lies outside the environment"
                )));
            }
        }
        if self.haps_position != self.config.haps_position() {
            return Err(Error::InvalidConfig(
                "HAPS must sit above the environment center".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(json)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Free-function form of [`Scenario::generate`].
pub fn generate_scenario(config: &EnvironmentConfig, density: f64) -> Result<Scenario> {
    Scenario::generate(config, density)
}

/// Free-function form of [`Scenario::extend_population`].
pub fn extend_population(scenario: &Scenario, new_density: f64) -> Result<Scenario> {
    scenario.extend_population(new_density)
}

fn checked_count(config: &EnvironmentConfig, density: f64) -> Result<usize> {
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::InvalidDensity {
            density,
            reason: "density must be positive and finite".into(),
        });
    }
    match config.ue_count(density) {
        0 => Err(Error::InvalidDensity {
            density,
            reason: format!("yields no users over {} m²", config.area()),
        }),
        n => Ok(n),
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[margin, extent - margin]`, or the midpoint when the margin
/// leaves no room.
fn uniform_with_margin(rng: &mut ChaCha8Rng, extent: f64, margin: f64) -> f64 {
    if extent > 2.0 * margin {
        rng.random_range(margin..=extent - margin)
    } else {
        extent / 2.0
    }
}

fn hotspot_centers(config: &EnvironmentConfig) -> Vec<Point2> {
    let mut rng = stream_rng(config.rng_seed, 0);
    let margin = 2.0 * config.hotspot_spread;
    (0..config.hotspot_count)
        .map(|_| {
            let x = uniform_with_margin(&mut rng, config.width, margin);
            let y = uniform_with_margin(&mut rng, config.height, margin);
            Point2::new(x, y)
        })
        .collect()
}

fn sample_ue(config: &EnvironmentConfig, centers: &[Point2], id: usize) -> UserEquipment {
    let center = centers[id % centers.len()];
    let mut rng = stream_rng(config.rng_seed, id as u64 + 1);
    let spread = config.hotspot_spread;
    let mut position = center;
    for _ in 0..MAX_REDRAWS {
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        position = Point2::new(center.x + spread * dx, center.y + spread * dy);
        if config.contains(&position) {
            return UserEquipment { id, position };
        }
    }
    position.x = position.x.clamp(0.0, config.width);
    position.y = position.y.clamp(0.0, config.height);
    UserEquipment { id, position }
}
