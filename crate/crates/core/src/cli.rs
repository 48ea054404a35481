//! Command-line front end: `run` executes a sweep from a JSON config and
//! writes CSVs and SVG plots; `inspect` summarizes a scenario JSON file.
//!
//! Exit codes: 0 success, 2 malformed config or unreadable input,
//! 3 invalid parameter combination, 4 I/O failure while writing outputs.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::harness::{run_sweep, SweepSpec};
use crate::plot::render_svg;
use crate::scenario::{EnvironmentConfig, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const ROWS_FILE: &str = "rows.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub environment: EnvironmentConfig,
    pub sweep: SweepSpec,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            environment: EnvironmentConfig::default(),
            sweep: SweepSpec::default(),
            output_dir: PathBuf::from("out"),
            emit_plots: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> crate::Result<()> {
        self.sweep.validate(&self.environment)
    }
}

/// File name of the chart for a sweep over `param`.
pub fn plot_file_name(param: &str) -> String {
    format!("energy_vs_{param}.svg")
}

#[derive(Debug, Parser)]
#[command(name = "vhetnet", version, about = "UAV/HAPS disaster-network energy-score sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a sweep and write CSV (and SVG) outputs.
    Run {
        /// JSON run configuration; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Base seed of the sweep.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Skip SVG generation.
        #[arg(long)]
        no_plots: bool,
        /// Override a config entry by dotted path, e.g. `sweep.replications=5`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Print a summary of a scenario JSON file.
    Inspect {
        scenario: PathBuf,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn malformed(source: &str, e: &serde_json::Error) -> CliError {
    CliError::new(
        EXIT_MALFORMED,
        format!("{source}:{}:{}: {e}", e.line(), e.column()),
    )
}

/// Loads a run configuration and applies `--set` overrides on top.
pub fn load_run_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig, CliError> {
    let (source, mut value) = match path {
        Some(p) => {
            let source = p.display().to_string();
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::new(EXIT_MALFORMED, format!("{source}: {e}")))?;
            // Deserialize from text first so schema errors keep their line numbers.
            serde_json::from_str::<RunConfig>(&text).map_err(|e| malformed(&source, &e))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| malformed(&source, &e))?;
            (source, value)
        }
        None => (
            "<defaults>".to_string(),
            serde_json::to_value(RunConfig::default()).expect("defaults serialize"),
        ),
    };
    for entry in overrides {
        apply_override(&mut value, entry)?;
    }
    serde_json::from_value(value).map_err(|e| {
        CliError::new(
            EXIT_MALFORMED,
            format!("{source}: after overrides: {e}"),
        )
    })
}

fn apply_override(root: &mut Value, entry: &str) -> Result<(), CliError> {
    let bad = |msg: String| CliError::new(EXIT_MALFORMED, msg);
    let (key, raw) = entry
        .split_once('=')
        .ok_or_else(|| bad(format!("--set expects KEY=VALUE, got {entry:?}")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(bad(format!("--set has an empty key segment in {key:?}")));
    }
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let mut parts = key.split('.').peekable();
    while let Some(part) = parts.next() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| bad(format!("--set {key}: {part:?} is not inside an object")))?;
        if parts.peek().is_none() {
            obj.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split yields at least one segment")
}

fn invalid(e: Error) -> CliError {
    CliError::new(EXIT_INVALID, format!("invalid configuration: {e}"))
}

/// Executes a run. Everything is validated and rendered in memory before
/// the first file is written.
pub fn cmd_run(config: &RunConfig, out: &mut dyn Write) -> Result<Vec<PathBuf>, CliError> {
    config.validate().map_err(invalid)?;
    let result = run_sweep(&config.sweep, &config.environment).map_err(invalid)?;

    let param = config.sweep.kind.param();
    let io = |e: Error| CliError::new(EXIT_IO, e.to_string());
    let mut files: Vec<(PathBuf, String)> = vec![
        (config.output_dir.join(ROWS_FILE), result.rows_csv().map_err(io)?),
        (config.output_dir.join(AGGREGATE_FILE), result.aggregate_csv().map_err(io)?),
    ];
    if config.emit_plots {
        let title = format!("Energy score vs {param}");
        files.push((
            config.output_dir.join(plot_file_name(param)),
            render_svg(&result.aggregates, &title),
        ));
    }

    let write_err = |p: &Path, e: std::io::Error| {
        CliError::new(EXIT_IO, format!("cannot write {}: {e}", p.display()))
    };
    std::fs::create_dir_all(&config.output_dir).map_err(|e| write_err(&config.output_dir, e))?;
    for (path, body) in &files {
        std::fs::write(path, body).map_err(|e| write_err(path, e))?;
    }

    let _ = writeln!(
        out,
        "{} sweep: {} rows over {} values x {} replications",
        param,
        result.rows.len(),
        config.sweep.values.len(),
        config.sweep.replications
    );
    for agg in &result.aggregates {
        let _ = writeln!(
            out,
            "  {:8} {}={:<10} mean={:.6e} sd={:.3e}",
            agg.method.name(),
            param,
            crate::harness::format_sig9(agg.swept_value),
            agg.mean_total,
            agg.sd_total
        );
    }
    for (path, _) in &files {
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

/// Human-readable summary of a scenario.
pub fn summarize_scenario(scenario: &Scenario) -> String {
    use std::fmt::Write as _;
    let cfg = &scenario.config;
    let mut s = String::new();
    let _ = writeln!(s, "area: {} m x {} m", cfg.width, cfg.height);
    let _ = writeln!(
        s,
        "UEs: {}, density: {:e} users/m^2",
        scenario.ues.len(),
        scenario.user_density
    );
    let hp = scenario.haps_position;
    let _ = writeln!(
        s,
        "HAPS at ({}, {}, {}), UAV altitude {} m",
        hp.x, hp.y, hp.z, cfg.uav_altitude
    );
    let hotspots = scenario.hotspot_centers.len();
    let _ = writeln!(
        s,
        "hotspots: {hotspots} (spread {} m, seed {})",
        cfg.hotspot_spread, cfg.rng_seed
    );
    for (h, c) in scenario.hotspot_centers.iter().enumerate() {
        let members = scenario.ues.iter().filter(|ue| ue.id % hotspots == h).count();
        let _ = writeln!(s, "  hotspot {h}: center ({:.1}, {:.1}), {members} UEs", c.x, c.y);
    }
    if cfg.landing_spots.is_empty() {
        let _ = writeln!(s, "landing spots: 0, no landing spots (DLC-AHN unavailable)");
    } else {
        let _ = writeln!(s, "landing spots: {}", cfg.landing_spots.len());
        for p in &cfg.landing_spots {
            let _ = writeln!(s, "  ({}, {})", p.x, p.y);
        }
    }
    s
}

pub fn cmd_inspect(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_MALFORMED, format!("{source}: {e}")))?;
    let scenario: Scenario = serde_json::from_str(&text).map_err(|e| malformed(&source, &e))?;
    scenario
        .validate()
        .map_err(|e| CliError::new(EXIT_MALFORMED, format!("{source}: {e}")))?;
    let _ = writeln!(out, "scenario: {source}");
    let _ = write!(out, "{}", summarize_scenario(&scenario));
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Run {
            config,
            seed,
            output,
            no_plots,
            set,
        } => load_run_config(config.as_deref(), &set).and_then(|mut cfg| {
            if let Some(seed) = seed {
                cfg.sweep.base_seed = seed;
            }
            if let Some(dir) = output {
                cfg.output_dir = dir;
            }
            if no_plots {
                cfg.emit_plots = false;
            }
            cmd_run(&cfg, out).map(|_| ())
        }),
        Command::Inspect { scenario } => cmd_inspect(&scenario, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
