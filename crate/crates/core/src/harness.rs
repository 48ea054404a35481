//! Parameter sweeps over user density, UAV count and head count.
//!
//! Replication `r` uses seed `base_seed + r` for both the scenario and the
//! clustering, and every method in a cell sees the same scenario, so method
//! comparisons are paired. Density sweeps grow one nested population per
//! replication instead of drawing a fresh one per density.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::ClusterSpec;
use crate::energy::{
    dlc_exclusion_for, evaluate_benchmark, evaluate_dlc_ahn, AccessMode, LoadModel,
};
use crate::error::{Error, Result};
use crate::scenario::{EnvironmentConfig, Scenario};
use crate::topology::{build_cup, build_dlc_ahn, build_slc};

pub const ROWS_HEADER: [&str; 7] = ["method", "delta", "n", "k", "replication", "seed", "total_score"];
pub const AGGREGATE_HEADER: [&str; 5] = ["method", "swept_param", "swept_value", "mean_total", "sd_total"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Density,
    UavCount,
    HeadCount,
}

impl SweepKind {
    /// Column name of the swept parameter.
    pub fn param(&self) -> &'static str {
        match self {
            SweepKind::Density => "delta",
            SweepKind::UavCount => "n",
            SweepKind::HeadCount => "k",
        }
    }
}

/// A curve in the output. The `*_inc` variants keep the DLC-AHN heads in the
/// benchmark totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SweepMethod {
    #[serde(rename = "DLC_AHN")]
    DlcAhn,
    #[serde(rename = "SLC")]
    Slc,
    #[serde(rename = "CUP")]
    Cup,
    #[serde(rename = "SLC_inc")]
    SlcInc,
    #[serde(rename = "CUP_inc")]
    CupInc,
}

impl SweepMethod {
    pub const ALL: [SweepMethod; 5] = [
        SweepMethod::DlcAhn,
        SweepMethod::Slc,
        SweepMethod::Cup,
        SweepMethod::SlcInc,
        SweepMethod::CupInc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepMethod::DlcAhn => "DLC_AHN",
            SweepMethod::Slc => "SLC",
            SweepMethod::Cup => "CUP",
            SweepMethod::SlcInc => "SLC_inc",
            SweepMethod::CupInc => "CUP_inc",
        }
    }

    fn needs_heads(&self) -> bool {
        matches!(self, SweepMethod::DlcAhn | SweepMethod::Slc | SweepMethod::Cup)
    }
}

impl fmt::Display for SweepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SweepMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    /// Swept values, strictly increasing: densities in users/m², or counts.
    pub values: Vec<f64>,
    /// Fixed density when not swept.
    pub density: f64,
    /// Fixed UAV count when not swept.
    pub n: usize,
    /// Fixed head count when not swept.
    pub k: usize,
    pub replications: usize,
    pub base_seed: u64,
    pub methods: Vec<SweepMethod>,
    /// Clustering settings; `k` and `rng_seed` are overwritten per cell.
    pub clustering: ClusterSpec,
    pub cup_radius_fraction: f64,
    pub access_mode: AccessMode,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self::density()
    }
}

impl SweepSpec {
    fn base(kind: SweepKind, values: Vec<f64>) -> Self {
        Self {
            kind,
            values,
            density: 5e-4,
            n: 8,
            k: 1,
            replications: 20,
            base_seed: 1,
            methods: vec![SweepMethod::DlcAhn, SweepMethod::Slc, SweepMethod::Cup],
            clustering: ClusterSpec::default(),
            cup_radius_fraction: 1.0,
            access_mode: AccessMode::Assigned,
        }
    }

    /// δ ∈ {1, 2, 4, 6, 8, 10}·10⁻⁴ with n = 8, k = 1.
    pub fn density() -> Self {
        Self::base(
            SweepKind::Density,
            vec![1e-4, 2e-4, 4e-4, 6e-4, 8e-4, 1e-3],
        )
    }

    /// n ∈ {3, …, 12} with δ = 5·10⁻⁴, k = 1.
    pub fn uav_count() -> Self {
        Self::base(SweepKind::UavCount, (3..=12).map(f64::from).collect())
    }

    /// k ∈ {1, …, 8} with n = 8, δ = 5·10⁻⁴, all five methods.
    pub fn head_count() -> Self {
        Self {
            methods: SweepMethod::ALL.to_vec(),
            ..Self::base(SweepKind::HeadCount, (1..=8).map(f64::from).collect())
        }
    }

    /// Every cell's (δ, n, k) in sweep order.
    fn cells(&self) -> Result<Vec<(f64, usize, usize)>> {
        self.values
            .iter()
            .map(|&v| {
                Ok(match self.kind {
                    SweepKind::Density => (v, self.n, self.k),
                    SweepKind::UavCount => (self.density, as_count(v, "n")?, self.k),
                    SweepKind::HeadCount => (self.density, self.n, as_count(v, "k")?),
                })
            })
            .collect()
    }

    /// Rejects every bad combination before anything runs.
    pub fn validate(&self, env: &EnvironmentConfig) -> Result<()> {
        env.validate()?;
        self.clustering.validate()?;
        let invalid = |msg: String| Err(Error::InvalidParameters(msg));
        if self.values.is_empty() {
            return invalid("sweep needs at least one value".into());
        }
        if self.values.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return invalid("sweep values must be strictly increasing".into());
        }
        if self.replications == 0 {
            return invalid("replications must be at least 1".into());
        }
        if self.methods.is_empty() {
            return invalid("at least one method is required".into());
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return invalid("methods must not repeat".into());
        }
        if !(self.cup_radius_fraction > 0.0 && self.cup_radius_fraction <= 1.0) {
            return invalid(format!(
                "cup_radius_fraction must lie in (0, 1], got {}",
                self.cup_radius_fraction
            ));
        }
        if self.methods.iter().any(SweepMethod::needs_heads) && env.landing_spots.is_empty() {
            return Err(Error::NoLandingSpots);
        }
        for (density, n, k) in self.cells()? {
            if !(density.is_finite() && density > 0.0) {
                return invalid(format!("density must be positive, got {density}"));
            }
            if n == 0 || k == 0 {
                return invalid("n and k must be at least 1".into());
            }
            if k > n {
                return invalid(format!("k = {k} exceeds n = {n}"));
            }
            let ues = env.ue_count(density);
            if ues < n {
                return invalid(format!("density {density} yields {ues} UEs, fewer than n = {n}"));
            }
        }
        if self.base_seed.checked_add(self.replications as u64 - 1).is_none() {
            return invalid("base_seed + replications overflows".into());
        }
        Ok(())
    }
}

fn as_count(v: f64, name: &str) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameters(format!(
            "{name} values must be positive integers, got {v}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: SweepMethod,
    pub delta: f64,
    pub n: usize,
    pub k: usize,
    pub replication: usize,
    pub seed: u64,
    pub total_score: f64,
}

impl SweepRow {
    pub fn swept_value(&self, kind: SweepKind) -> f64 {
        match kind {
            SweepKind::Density => self.delta,
            SweepKind::UavCount => self.n as f64,
            SweepKind::HeadCount => self.k as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub method: SweepMethod,
    pub swept_param: String,
    pub swept_value: f64,
    pub mean_total: f64,
    /// Population standard deviation.
    pub sd_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<AggregateRow>,
}

impl SweepResult {
    /// Rows of one method and replication, in sweep order.
    pub fn series(&self, method: SweepMethod, replication: usize) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.replication == replication)
            .map(|r| r.total_score)
            .collect()
    }

    /// Mean totals of one method, in sweep order.
    pub fn mean_series(&self, method: SweepMethod) -> Vec<f64> {
        self.aggregates
            .iter()
            .filter(|a| a.method == method)
            .map(|a| a.mean_total)
            .collect()
    }

    pub fn rows_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        write_rows_csv(&self.rows, &mut out)?;
        Ok(String::from_utf8(out).expect("CSV is ASCII"))
    }

    pub fn aggregate_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        write_aggregate_csv(&self.aggregates, &mut out)?;
        Ok(String::from_utf8(out).expect("CSV is ASCII"))
    }
}

/// Totals of every method for one (δ, n, k) on one scenario.
pub fn evaluate_cell(
    scenario: &Scenario,
    n: usize,
    k: usize,
    spec: &SweepSpec,
    seed: u64,
    methods: &[SweepMethod],
) -> Result<Vec<(SweepMethod, f64)>> {
    let cluster = spec.clustering.with_seed(seed);
    let access = spec.access_mode;
    let needs = |m: SweepMethod| methods.contains(&m);

    let dlc = if methods.iter().any(SweepMethod::needs_heads) {
        Some(build_dlc_ahn(scenario, n, k, &cluster)?)
    } else {
        None
    };
    let slc = if needs(SweepMethod::Slc) || needs(SweepMethod::SlcInc) {
        Some(build_slc(scenario, n, &cluster)?)
    } else {
        None
    };
    let cup = if needs(SweepMethod::Cup) || needs(SweepMethod::CupInc) {
        Some(build_cup(scenario, n, spec.cup_radius_fraction)?)
    } else {
        None
    };

    let mut out = Vec::with_capacity(methods.len());
    for &m in methods {
        let total = match m {
            SweepMethod::DlcAhn => {
                let t = dlc.as_ref().expect("built above");
                evaluate_dlc_ahn(t, scenario, &LoadModel::ue_count(t), access)?.total
            }
            SweepMethod::Slc | SweepMethod::Cup | SweepMethod::SlcInc | SweepMethod::CupInc => {
                let bench = match m {
                    SweepMethod::Slc | SweepMethod::SlcInc => slc.as_ref(),
                    _ => cup.as_ref(),
                }
                .expect("built above");
                let include = matches!(m, SweepMethod::SlcInc | SweepMethod::CupInc);
                let exclusion = match (&dlc, include) {
                    (Some(d), false) => dlc_exclusion_for(bench, d)?,
                    _ => Default::default(),
                };
                let loads = LoadModel::ue_count(bench);
                evaluate_benchmark(bench, scenario, &loads, access, &exclusion, include)?.total
            }
        };
        out.push((m, total));
    }
    Ok(out)
}

fn run_replication(
    spec: &SweepSpec,
    env: &EnvironmentConfig,
    replication: usize,
) -> Result<Vec<SweepRow>> {
    let seed = spec.base_seed + replication as u64;
    let env = EnvironmentConfig {
        rng_seed: seed,
        ..env.clone()
    };
    let cells = spec.cells()?;
    let mut rows = Vec::with_capacity(cells.len() * spec.methods.len());
    let mut scenario: Option<Scenario> = None;
    for (density, n, k) in cells {
        let current = match scenario.take() {
            Some(s) if s.user_density == density => s,
            Some(s) if spec.kind == SweepKind::Density => s.extend_population(density)?,
            _ => Scenario::generate(&env, density)?,
        };
        for (method, total_score) in evaluate_cell(&current, n, k, spec, seed, &spec.methods)? {
            rows.push(SweepRow {
                method,
                delta: density,
                n,
                k,
                replication,
                seed,
                total_score,
            });
        }
        scenario = Some(current);
    }
    Ok(rows)
}

/// Runs every (value, replication) cell. Replications run in parallel; the
/// rows come back sorted by method, swept value and replication.
pub fn run_sweep(spec: &SweepSpec, env: &EnvironmentConfig) -> Result<SweepResult> {
    spec.validate(env)?;
    let per_rep: Vec<Vec<SweepRow>> = (0..spec.replications)
        .into_par_iter()
        .map(|r| run_replication(spec, env, r))
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = per_rep.into_iter().flatten().collect();
    let kind = spec.kind;
    rows.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.swept_value(kind).total_cmp(&b.swept_value(kind)))
            .then(a.replication.cmp(&b.replication))
    });
    let aggregates = aggregate(&rows, kind)?;
    Ok(SweepResult {
        kind,
        rows,
        aggregates,
    })
}

/// Mean and population standard deviation of totals per (method, swept
/// value), accumulated with Welford's update.
pub fn aggregate(rows: &[SweepRow], kind: SweepKind) -> Result<Vec<AggregateRow>> {
    if rows.is_empty() {
        return Err(Error::Empty("row list"));
    }
    #[derive(Default)]
    struct Acc {
        count: f64,
        mean: f64,
        m2: f64,
    }
    let mut groups: BTreeMap<(SweepMethod, u64), (f64, Acc)> = BTreeMap::new();
    for row in rows {
        let value = row.swept_value(kind);
        // Order by value; the bit pattern is monotone for non-negative floats.
        let (_, acc) = groups
            .entry((row.method, value.to_bits()))
            .or_insert_with(|| (value, Acc::default()));
        acc.count += 1.0;
        let delta = row.total_score - acc.mean;
        acc.mean += delta / acc.count;
        acc.m2 += delta * (row.total_score - acc.mean);
    }
    Ok(groups
        .into_iter()
        .map(|((method, _), (value, acc))| AggregateRow {
            method,
            swept_param: kind.param().to_string(),
            swept_value: value,
            mean_total: acc.mean,
            sd_total: (acc.m2 / acc.count).max(0.0).sqrt(),
        })
        .collect())
}

/// Formats `x` with 9 significant digits, in plain notation for moderate
/// exponents and scientific otherwise. Trailing zeros are dropped.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_rows_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ROWS_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.name().to_string(),
            format_sig9(r.delta),
            r.n.to_string(),
            r.k.to_string(),
            r.replication.to_string(),
            r.seed.to_string(),
            format_sig9(r.total_score),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(rows: &[AggregateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_HEADER)?;
    for a in rows {
        w.write_record([
            a.method.name().to_string(),
            a.swept_param.clone(),
            format_sig9(a.swept_value),
            format_sig9(a.mean_total),
            format_sig9(a.sd_total),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_aggregate_csv<R: Read>(input: R) -> Result<Vec<AggregateRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != AGGREGATE_HEADER {
        return Err(Error::InvalidConfig(format!(
            "unexpected aggregate header {header:?}"
        )));
    }
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| Error::InvalidConfig(format!("bad number {s:?}: {e}")))
    };
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok(AggregateRow {
                method: rec[0].parse()?,
                swept_param: rec[1].to_string(),
                swept_value: parse(&rec[2])?,
                mean_total: parse(&rec[3])?,
                sd_total: parse(&rec[4])?,
            })
        })
        .collect()
}
