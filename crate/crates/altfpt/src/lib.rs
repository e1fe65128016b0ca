//! Simulation and estimation of first-passage times for Brownian motion
//! with alternating drift and variance.
//!
//! The model: a one-dimensional diffusion whose infinitesimal drift and
//! variance switch between two regimes (an upward-drifting and a
//! downward-drifting one) at the epochs of an alternating renewal
//! process, starting below a fixed barrier. The crate provides
//!
//! * an exact event-driven simulator for the first-passage time through
//!   the barrier ([`simulate_fpt`], [`simulate_batch`]): paths are
//!   evaluated only at regime switches, with the crossing decision and
//!   both conditional draws taken from closed-form densities, so there
//!   is no time-discretization bias;
//! * kernel density estimation of the first-passage law from simulated
//!   samples with pointwise standard errors ([`estimate_density`]),
//!   plus its integrated cdf ([`estimate_cdf`]);
//! * analytic lower bounds for the first-passage pdf and cdf and an
//!   upper cdf bound under equal diffusion scales ([`pdf_lower_bound`],
//!   [`cdf_lower_bound`], [`cdf_upper_bound`]);
//! * reproducible scenario presets and file-based artifacts
//!   ([`scenario::preset`], [`run::run_scenario`]).
//!
//! Batch outputs are a pure function of `(params, n, seed)`: the batch
//! is split over a fixed number of counter-based generator streams, so
//! results are byte-identical across machines and thread counts.

pub mod bounds;
pub mod density;
pub mod engine;
pub mod error;
pub mod laws;
pub mod math;
pub mod run;
pub mod samplers;
pub mod scenario;
pub mod wiener;

pub use bounds::{
    cdf_lower_bound, cdf_upper_bound, evaluate_bound_curve, one_switch_density,
    one_switch_density_quadrature, pdf_lower_bound, BoundCurve, BoundKind,
};
pub use density::{
    default_bandwidth, default_grid, epanechnikov, estimate_cdf, estimate_density, DensityEstimate,
};
pub use engine::{simulate_batch, simulate_fpt, AlternatingParams, FptOutcome, Regime};
pub use error::{Error, Result};
pub use laws::SwitchingLaw;
pub use run::{run_scenario, RunManifest, SampleSet};
pub use samplers::{
    sample_avoiding_state, sample_crossing_time, sample_truncated_std_normal, Tolerances,
};
pub use scenario::{geometric_to_additive, preset, ScenarioConfig};
pub use wiener::{avoiding_pdf, crossing_cdf, crossing_pdf, pdf_mode, Barrier, WienerRegime};
