//! File formats and the end-to-end scenario runner.
//!
//! Three tabular artifacts are emitted, all deterministic functions of
//! the scenario config:
//!
//! * `samples.csv`: one `outcome,time` row per simulated path, after a
//!   schema header line.
//! * `density.csv`: `t,h_hat,se,cdf_hat` columns of the kernel estimate.
//! * `bounds.csv`: `t` plus one column per analytic bound curve.
//!
//! Every float is written in the shortest decimal form that parses back
//! to the same bits, so "byte-identical outputs" and "same numbers" are
//! the same claim. A `manifest.json` records the config snapshot and
//! run summary; feeding the embedded config back through the runner
//! regenerates the CSV files byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{evaluate_bound_curve, BoundCurve, BoundKind};
use crate::density::{default_bandwidth, default_grid, estimate_cdf, estimate_density};
use crate::engine::{simulate_batch, FptOutcome};
use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;

/// Version tag of the sample file layout.
pub const SAMPLES_SCHEMA: &str = "altfpt-samples/1";

/// Version tag of the manifest layout.
pub const MANIFEST_SCHEMA: u32 = 1;

/// How the estimation bandwidth was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthSource {
    /// Set explicitly in the config or on the command line.
    Explicit,
    /// Silverman's rule applied to the uncensored sample.
    Silverman,
}

/// Summary of one run: enough to reproduce every emitted number plus
/// bookkeeping that is informative but not load-bearing (wall time,
/// censoring fraction). Fields not meaningful for a given command are
/// absent: an estimate run has an input file instead of a config
/// snapshot, a bounds-only run has no simulation counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub tool_version: String,
    /// Which operation produced the artifacts: `simulate`, `estimate`,
    /// `bounds`, or `scenario`.
    pub command: String,
    /// Config snapshot; feeding it back through the same command
    /// regenerates the outputs byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ScenarioConfig>,
    /// Sample file an estimate run read.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_censored: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub censoring_fraction: Option<f64>,
    /// Bandwidth actually used; absent when too few paths crossed for
    /// an estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth_source: Option<BandwidthSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    pub wall_time_seconds: f64,
    /// File names written into the output directory.
    pub outputs: Vec<String>,
}

/// Shortest round-trip decimal form.
fn fmt_float(v: f64) -> String {
    format!("{v}")
}

/// Uncensored crossing times plus the total path count they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub crossed: Vec<f64>,
    pub n_total: u64,
}

impl SampleSet {
    pub fn n_censored(&self) -> u64 {
        self.n_total - self.crossed.len() as u64
    }

    pub fn censoring_fraction(&self) -> f64 {
        self.n_censored() as f64 / self.n_total as f64
    }
}

/// Writes outcomes as a sample file. Censored rows carry the horizon
/// time, which is informative for readers; parsers rely only on the tag.
pub fn write_samples_csv(path: &Path, outcomes: &[FptOutcome], t_max: f64) -> Result<()> {
    let mut text = String::with_capacity(outcomes.len() * 16 + 64);
    text.push_str(SAMPLES_SCHEMA);
    text.push('\n');
    text.push_str("outcome,time\n");
    for o in outcomes {
        match o {
            FptOutcome::Crossed(t) => {
                let _ = writeln!(text, "crossed,{}", fmt_float(*t));
            }
            FptOutcome::Censored => {
                let _ = writeln!(text, "censored,{}", fmt_float(t_max));
            }
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Parses a sample file back into crossing times and a total count.
pub fn read_samples_csv(path: &Path) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == SAMPLES_SCHEMA => {}
        Some(other) => {
            return Err(Error::SampleFile(format!(
                "unrecognized sample schema line {other:?}, expected {SAMPLES_SCHEMA:?}"
            )))
        }
        None => return Err(Error::SampleFile("empty sample file".into())),
    }
    match lines.next() {
        Some("outcome,time") => {}
        other => {
            return Err(Error::SampleFile(format!(
                "expected column header \"outcome,time\", got {other:?}"
            )))
        }
    }
    let mut crossed = Vec::new();
    let mut n_total = 0u64;
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = || Error::SampleFile(format!("malformed row {} : {line:?}", i + 3));
        let (tag, time) = line.split_once(',').ok_or_else(bad)?;
        let time: f64 = time.parse().map_err(|_| bad())?;
        match tag {
            "crossed" => {
                if !(time.is_finite() && time > 0.0) {
                    return Err(bad());
                }
                crossed.push(time);
            }
            "censored" => {}
            _ => return Err(bad()),
        }
        n_total += 1;
    }
    if n_total == 0 {
        return Err(Error::SampleFile(
            "sample file contains no outcome rows".into(),
        ));
    }
    Ok(SampleSet { crossed, n_total })
}

/// Writes the kernel estimate and its integrated cdf as
/// `t,h_hat,se,cdf_hat` rows.
pub fn write_density_csv(
    path: &Path,
    estimate: &crate::density::DensityEstimate,
    cdf: &[f64],
) -> Result<()> {
    if cdf.len() != estimate.grid.len() {
        return Err(Error::Domain(format!(
            "cdf column has {} rows but the grid has {}",
            cdf.len(),
            estimate.grid.len()
        )));
    }
    let mut text = String::with_capacity(estimate.grid.len() * 48 + 32);
    text.push_str("t,h_hat,se,cdf_hat\n");
    for (i, &t) in estimate.grid.iter().enumerate() {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            fmt_float(t),
            fmt_float(estimate.h_hat[i]),
            fmt_float(estimate.se[i]),
            fmt_float(cdf[i]),
        );
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes bound curves sharing one grid as a `t,<kind>,...` table.
pub fn write_bounds_csv(path: &Path, curves: &[BoundCurve]) -> Result<()> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Domain("at least one bound curve is required".into()))?;
    for c in curves {
        if c.grid != first.grid {
            return Err(Error::Domain(
                "bound curves in one table must share the evaluation grid".into(),
            ));
        }
    }
    let mut text = String::with_capacity(first.grid.len() * 32 * curves.len());
    text.push('t');
    for c in curves {
        text.push(',');
        text.push_str(&c.kind.column_name());
    }
    text.push('\n');
    for i in 0..first.grid.len() {
        text.push_str(&fmt_float(first.grid[i]));
        for c in curves {
            text.push(',');
            text.push_str(&fmt_float(c.values[i]));
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Runs a scenario end to end into `out_dir`: simulate, estimate
/// (skipped with fewer than two crossings), evaluate bounds (the cdf
/// upper bound only under its equal-scale hypothesis), write the three
/// CSV artifacts plus `manifest.json`, and return the manifest.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let started = Instant::now();
    std::fs::create_dir_all(out_dir)?;
    let mut outputs = Vec::new();

    let est = &config.estimation;
    let outcomes = simulate_batch(&config.params, est.n, est.seed)?;
    let samples_name = "samples.csv";
    write_samples_csv(&out_dir.join(samples_name), &outcomes, config.params.t_max)?;
    outputs.push(samples_name.to_string());

    let crossed: Vec<f64> = outcomes.iter().filter_map(|o| o.crossed_time()).collect();
    let n_censored = est.n - crossed.len() as u64;

    let mut bandwidth = None;
    let mut bandwidth_source = None;
    if crossed.len() >= 2 {
        let (bw, source) = match est.bandwidth {
            Some(bw) => (bw, BandwidthSource::Explicit),
            None => (default_bandwidth(&crossed)?, BandwidthSource::Silverman),
        };
        let grid = match est.grid_max {
            Some(gm) => {
                let step = gm / (est.grid_points - 1) as f64;
                (0..est.grid_points).map(|i| i as f64 * step).collect()
            }
            None => default_grid(&crossed, bw, est.grid_points)?,
        };
        let density = estimate_density(&crossed, est.n, bw, &grid)?;
        let cdf = estimate_cdf(&density);
        let density_name = "density.csv";
        write_density_csv(&out_dir.join(density_name), &density, &cdf)?;
        outputs.push(density_name.to_string());
        bandwidth = Some(bw);
        bandwidth_source = Some(source);
    }

    let k = config.params.initial_regime;
    let grid = config.bounds_grid.times();
    let mut curves = vec![
        evaluate_bound_curve(BoundKind::PdfLower(k), &grid, &config.params)?,
        evaluate_bound_curve(BoundKind::CdfLower(k), &grid, &config.params)?,
    ];
    if config.params.sigma1 == config.params.sigma2 {
        curves.push(evaluate_bound_curve(
            BoundKind::CdfUpper,
            &grid,
            &config.params,
        )?);
    }
    let bounds_name = "bounds.csv";
    write_bounds_csv(&out_dir.join(bounds_name), &curves)?;
    outputs.push(bounds_name.to_string());

    let manifest = RunManifest {
        schema: MANIFEST_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: "scenario".to_string(),
        config: Some(config.clone()),
        input: None,
        n: Some(est.n),
        seed: Some(est.seed),
        n_censored: Some(n_censored),
        censoring_fraction: Some(n_censored as f64 / est.n as f64),
        bandwidth,
        bandwidth_source,
        grid_points: Some(est.grid_points),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs,
    };
    write_manifest(&out_dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Serializes a manifest as pretty JSON.
pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads a manifest back.
pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    let manifest: RunManifest = serde_json::from_str(&text)?;
    if manifest.schema != MANIFEST_SCHEMA {
        return Err(Error::InvalidParam(format!(
            "unsupported manifest schema {}, expected {}",
            manifest.schema, MANIFEST_SCHEMA
        )));
    }
    Ok(manifest)
}

/// Joins an output directory with a file name, for callers assembling
/// paths from manifest entries.
pub fn output_path(out_dir: &Path, name: &str) -> PathBuf {
    out_dir.join(name)
}
