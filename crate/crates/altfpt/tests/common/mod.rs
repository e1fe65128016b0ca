//! Shared statistical helpers for the integration and acceptance tests.
//!
//! Everything here is an independent check on the library: the
//! Kolmogorov-Smirnov machinery compares samples against a cdf supplied
//! by the caller, `simpson` integrates without touching the crate's
//! quadrature, and the Euler-Maruyama oracle estimates crossing
//! probabilities by brute-force path discretization.

#![allow(dead_code)] // each test target uses its own subset
#![allow(clippy::too_many_arguments)] // oracle helpers mirror the physical parameter lists

use altfpt::wiener::{avoiding_pdf, crossing_cdf, Barrier, WienerRegime};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F| against a cdf.
pub fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!sample.is_empty());
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        let lo = (f - i as f64 / n).abs();
        let hi = ((i + 1) as f64 / n - f).abs();
        d = d.max(lo).max(hi);
    }
    d
}

/// Asymptotic 1% critical value for the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Composite Simpson's rule with `2 * half_steps` panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, half_steps: usize) -> f64 {
    let n = 2 * half_steps;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Standard error of a proportion estimate p from n trials.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Fraction of Euler-Maruyama paths of a single-regime Brownian motion
/// that touch the barrier by time `t`, on a fixed step grid. This is a
/// discretization of the same stopping problem the closed-form cdf
/// solves, so it carries an O(sqrt(step)) crossing-detection bias; use
/// it with step sizes small enough for the tolerance in play.
pub fn euler_crossing_fraction(
    mu: f64,
    sigma: f64,
    beta: f64,
    x0: f64,
    t: f64,
    step: f64,
    paths: u64,
    seed: u64,
) -> f64 {
    let n_steps = (t / step).round() as u64;
    let sqrt_step = step.sqrt();
    let streams = 64u64;
    let base = paths / streams;
    let rem = paths % streams;
    let crossed: u64 = (0..streams)
        .into_par_iter()
        .map(|i| {
            let count = base + u64::from(i < rem);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut hits = 0u64;
            for _ in 0..count {
                let mut x = x0;
                for _ in 0..n_steps {
                    let z: f64 = rng.sample(StandardNormal);
                    x += mu * step + sigma * sqrt_step * z;
                    if x >= beta {
                        hits += 1;
                        break;
                    }
                }
            }
            hits
        })
        .sum();
    crossed as f64 / paths as f64
}

/// Sample mean and unbiased variance.
pub fn mean_and_variance(sample: &[f64]) -> (f64, f64) {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Normalized cdf of the boundary-avoiding state at time `tau`, built by
/// cumulative trapezoid integration of the avoiding density on a fine
/// grid and evaluated by linear interpolation. Serves as a quadrature
/// oracle for the avoiding-state sampler.
pub struct AvoidingCdfTable {
    lower: f64,
    step: f64,
    cum: Vec<f64>,
    survival: f64,
}

impl AvoidingCdfTable {
    pub fn build(regime: WienerRegime, barrier: Barrier, tau: f64, points: usize) -> Self {
        let lower = barrier.x0() + regime.mu() * tau - 12.0 * regime.sigma() * tau.sqrt();
        let step = (barrier.beta() - lower) / points as f64;
        let values: Vec<f64> = (0..=points)
            .map(|i| avoiding_pdf(regime, barrier, lower + i as f64 * step, tau).unwrap())
            .collect();
        let mut cum = vec![0.0f64; points + 1];
        for i in 1..=points {
            cum[i] = cum[i - 1] + 0.5 * (values[i - 1] + values[i]) * step;
        }
        let survival = 1.0 - crossing_cdf(regime, barrier, tau).unwrap();
        Self {
            lower,
            step,
            cum,
            survival,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let top = (self.cum.len() - 1) as f64;
        let pos = ((x - self.lower) / self.step).clamp(0.0, top);
        let idx = pos.floor() as usize;
        let frac = pos - idx as f64;
        let raw = if idx + 1 >= self.cum.len() {
            self.cum[idx]
        } else {
            self.cum[idx] + frac * (self.cum[idx + 1] - self.cum[idx])
        };
        (raw / self.survival).clamp(0.0, 1.0)
    }
}
