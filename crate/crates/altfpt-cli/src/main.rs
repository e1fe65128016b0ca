//! Command-line front end: simulate, estimate, and bound first-passage
//! times of a Brownian motion whose drift and variance alternate at
//! renewal epochs.
//!
//! Subcommands compose through files (sample CSV in, density CSV out),
//! so a long simulation is resumable at the estimation stage. Every
//! command drops a `manifest.json` next to its outputs with enough
//! information to regenerate them byte for byte.
//!
//! Exit codes: 0 success; 2 configuration or usage errors; 3 I/O and
//! sample-file errors; 4 a bound was requested outside its hypothesis
//! (unequal diffusion scales); 1 internal sampler failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use altfpt::bounds::{evaluate_bound_curve, BoundKind};
use altfpt::density::{default_bandwidth, default_grid, estimate_cdf, estimate_density};
use altfpt::engine::simulate_batch;
use altfpt::error::{Error, Result};
use altfpt::run::{
    read_samples_csv, write_bounds_csv, write_density_csv, write_manifest, write_samples_csv,
    BandwidthSource, RunManifest, MANIFEST_SCHEMA,
};
use altfpt::scenario::{preset, ScenarioConfig};
use clap::{Args, Parser, Subcommand};

/// Environment variable supplying the output directory when --out is
/// not given; the current directory is the final fallback.
const OUT_DIR_ENV: &str = "ALTFPT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "altfpt",
    version,
    about = "First-passage times of Brownian motion with alternating drift and variance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate first-passage outcomes into samples.csv.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        overrides: OverrideArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Estimate the crossing density and cdf from a sample file.
    Estimate {
        /// Sample file produced by `simulate` or `scenario`.
        sample_file: PathBuf,
        /// Kernel bandwidth; Silverman's rule on the crossing times
        /// when omitted.
        #[arg(long)]
        bandwidth: Option<f64>,
        /// Number of evaluation grid points.
        #[arg(long = "grid-points", default_value_t = 512)]
        grid_points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the analytic bound curves on a time grid.
    Bounds {
        #[command(flatten)]
        source: SourceArgs,
        /// Horizon of the bound grid.
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        /// Barrier level (additive scale).
        #[arg(long)]
        beta: Option<f64>,
        /// Number of grid points.
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        /// Require the cdf upper bound; errors when the diffusion
        /// scales differ, since the bound only holds for equal scales.
        #[arg(long)]
        upper: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a scenario end to end: simulate, estimate, bounds.
    Scenario {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        overrides: OverrideArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in scenario: fig1, fig2, or fig3.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Scenario config as a JSON document.
    #[arg(long, required_unless_present = "preset")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct OverrideArgs {
    /// Number of simulated paths.
    #[arg(long)]
    n: Option<u64>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Censoring horizon for simulated paths.
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Barrier level (additive scale).
    #[arg(long)]
    beta: Option<f64>,
    /// Kernel bandwidth; Silverman's rule when omitted.
    #[arg(long)]
    bandwidth: Option<f64>,
    /// Number of evaluation grid points for the density estimate.
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; defaults to $ALTFPT_OUT_DIR, then the current
    /// directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArgs {
    fn resolve(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::SampleFile(_) => 3,
        Error::UnequalSigmas { .. } => 4,
        Error::InvalidParam(_) | Error::Domain(_) | Error::UnknownPreset(_) | Error::Json(_) => 2,
        Error::RejectionCap(_) => 1,
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            source,
            overrides,
            out,
        } => cmd_simulate(&source, &overrides, &out),
        Command::Estimate {
            sample_file,
            bandwidth,
            grid_points,
            out,
        } => cmd_estimate(&sample_file, bandwidth, grid_points, &out),
        Command::Bounds {
            source,
            t_max,
            beta,
            grid_points,
            upper,
            out,
        } => cmd_bounds(&source, t_max, beta, grid_points, upper, &out),
        Command::Scenario {
            source,
            overrides,
            out,
        } => cmd_scenario(&source, &overrides, &out),
    }
}

fn load_config(source: &SourceArgs) -> Result<ScenarioConfig> {
    if let Some(name) = &source.preset {
        preset(name)
    } else {
        let path = source.config.as_ref().expect("clap guarantees a source");
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn apply_overrides(config: &mut ScenarioConfig, ov: &OverrideArgs) -> Result<()> {
    if let Some(n) = ov.n {
        config.estimation.n = n;
    }
    if let Some(seed) = ov.seed {
        config.estimation.seed = seed;
    }
    if let Some(t_max) = ov.t_max {
        config.params.t_max = t_max;
    }
    if let Some(beta) = ov.beta {
        set_beta(config, beta)?;
    }
    if let Some(bandwidth) = ov.bandwidth {
        config.estimation.bandwidth = Some(bandwidth);
    }
    if let Some(points) = ov.grid_points {
        config.estimation.grid_points = points;
    }
    Ok(())
}

fn set_beta(config: &mut ScenarioConfig, beta: f64) -> Result<()> {
    if config.geometric.is_some() {
        return Err(Error::InvalidParam(
            "--beta cannot override a config whose barrier is derived from a geometric \
             mapping; change the mapping's barrier instead"
                .into(),
        ));
    }
    config.params.beta = beta;
    Ok(())
}

/// Manifest skeleton with only the universal fields filled in.
fn manifest_base(command: &str) -> RunManifest {
    RunManifest {
        schema: MANIFEST_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        config: None,
        input: None,
        n: None,
        seed: None,
        n_censored: None,
        censoring_fraction: None,
        bandwidth: None,
        bandwidth_source: None,
        grid_points: None,
        wall_time_seconds: 0.0,
        outputs: Vec::new(),
    }
}

fn cmd_simulate(source: &SourceArgs, ov: &OverrideArgs, out: &OutArgs) -> Result<()> {
    let started = Instant::now();
    let mut config = load_config(source)?;
    apply_overrides(&mut config, ov)?;
    config.validate()?;

    let n = config.estimation.n;
    let seed = config.estimation.seed;
    let outcomes = simulate_batch(&config.params, n, seed)?;
    let n_crossed = outcomes.iter().filter(|o| o.is_crossed()).count() as u64;
    let n_censored = n - n_crossed;

    let out_dir = out.resolve();
    std::fs::create_dir_all(&out_dir)?;
    write_samples_csv(&out_dir.join("samples.csv"), &outcomes, config.params.t_max)?;

    let mut manifest = manifest_base("simulate");
    manifest.config = Some(config);
    manifest.n = Some(n);
    manifest.seed = Some(seed);
    manifest.n_censored = Some(n_censored);
    manifest.censoring_fraction = Some(n_censored as f64 / n as f64);
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.outputs = vec!["samples.csv".to_string()];
    write_manifest(&out_dir.join("manifest.json"), &manifest)?;

    println!(
        "wrote {} : {} paths, {} crossed, {} censored",
        out_dir.join("samples.csv").display(),
        n,
        n_crossed,
        n_censored
    );
    Ok(())
}

fn cmd_estimate(
    sample_file: &Path,
    bandwidth: Option<f64>,
    grid_points: usize,
    out: &OutArgs,
) -> Result<()> {
    let started = Instant::now();
    let set = read_samples_csv(sample_file)?;
    let out_dir = out.resolve();
    std::fs::create_dir_all(&out_dir)?;

    let mut manifest = manifest_base("estimate");
    manifest.input = Some(sample_file.display().to_string());
    manifest.n = Some(set.n_total);
    manifest.n_censored = Some(set.n_censored());
    manifest.censoring_fraction = Some(set.censoring_fraction());

    if set.crossed.len() < 2 {
        // An estimate needs spread; report instead of crashing.
        manifest.wall_time_seconds = started.elapsed().as_secs_f64();
        write_manifest(&out_dir.join("manifest.json"), &manifest)?;
        println!(
            "no crossings to estimate from: {} of {} paths crossed before the horizon \
             (at least 2 needed); wrote manifest only",
            set.crossed.len(),
            set.n_total
        );
        return Ok(());
    }

    let (bw, bw_source) = match bandwidth {
        Some(b) => (b, BandwidthSource::Explicit),
        None => (default_bandwidth(&set.crossed)?, BandwidthSource::Silverman),
    };
    let grid = default_grid(&set.crossed, bw, grid_points)?;
    let estimate = estimate_density(&set.crossed, set.n_total, bw, &grid)?;
    let cdf = estimate_cdf(&estimate);
    write_density_csv(&out_dir.join("density.csv"), &estimate, &cdf)?;

    manifest.bandwidth = Some(bw);
    manifest.bandwidth_source = Some(bw_source);
    manifest.grid_points = Some(grid_points);
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.outputs = vec!["density.csv".to_string()];
    write_manifest(&out_dir.join("manifest.json"), &manifest)?;

    println!(
        "wrote {} : {} crossings of {} paths, bandwidth {} ({})",
        out_dir.join("density.csv").display(),
        set.crossed.len(),
        set.n_total,
        bw,
        match bw_source {
            BandwidthSource::Explicit => "explicit",
            BandwidthSource::Silverman => "silverman",
        }
    );
    Ok(())
}

fn cmd_bounds(
    source: &SourceArgs,
    t_max: Option<f64>,
    beta: Option<f64>,
    grid_points: Option<usize>,
    upper: bool,
    out: &OutArgs,
) -> Result<()> {
    let started = Instant::now();
    let mut config = load_config(source)?;
    if let Some(t_max) = t_max {
        config.bounds_grid.t_max = t_max;
    }
    if let Some(points) = grid_points {
        config.bounds_grid.points = points;
    }
    if let Some(beta) = beta {
        set_beta(&mut config, beta)?;
    }
    config.validate()?;

    let params = &config.params;
    if upper && params.sigma1 != params.sigma2 {
        return Err(Error::UnequalSigmas {
            sigma1: params.sigma1,
            sigma2: params.sigma2,
        });
    }

    let grid = config.bounds_grid.times();
    let k = params.initial_regime;
    let mut curves = vec![
        evaluate_bound_curve(BoundKind::PdfLower(k), &grid, params)?,
        evaluate_bound_curve(BoundKind::CdfLower(k), &grid, params)?,
    ];
    if params.sigma1 == params.sigma2 {
        curves.push(evaluate_bound_curve(BoundKind::CdfUpper, &grid, params)?);
    }

    let out_dir = out.resolve();
    std::fs::create_dir_all(&out_dir)?;
    write_bounds_csv(&out_dir.join("bounds.csv"), &curves)?;

    let n_curves = curves.len();
    let n_points = grid.len();
    let mut manifest = manifest_base("bounds");
    manifest.config = Some(config);
    manifest.grid_points = Some(n_points);
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.outputs = vec!["bounds.csv".to_string()];
    write_manifest(&out_dir.join("manifest.json"), &manifest)?;

    println!(
        "wrote {} : {} curves over {} grid points",
        out_dir.join("bounds.csv").display(),
        n_curves,
        n_points
    );
    Ok(())
}

fn cmd_scenario(source: &SourceArgs, ov: &OverrideArgs, out: &OutArgs) -> Result<()> {
    let mut config = load_config(source)?;
    apply_overrides(&mut config, ov)?;
    let out_dir = out.resolve();
    let manifest = altfpt::run::run_scenario(&config, &out_dir)?;
    println!(
        "wrote {} into {} : {} paths, censoring fraction {:.4}",
        manifest.outputs.join(", "),
        out_dir.display(),
        manifest.n.unwrap_or(0),
        manifest.censoring_fraction.unwrap_or(f64::NAN)
    );
    Ok(())
}
