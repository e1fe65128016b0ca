//! Closed-form first-passage kernels for a constant-parameter Wiener
//! process: crossing cdf and pdf through an upper barrier, the
//! barrier-avoiding transition density, and the location of the pdf mode.
//!
//! Everything downstream (the event-driven simulator, the conditional
//! samplers, the analytic bounds) consumes these four functions, so they
//! are written to stay finite over the whole parameter range: the
//! exponential prefactor `exp(2 mu d / sigma^2)` is never formed on its
//! own but fused with the Gaussian tail it multiplies, and the densities
//! are assembled in log space where a singular prefactor meets a
//! vanishing exponential.

use crate::error::{Error, Result};
use crate::math::{exp_phi_product, phi, LN_SQRT_2PI};

/// Drift and diffusion scale of one regime. `sigma` is the scale in
/// state-units per square-root time, so the variance over an interval of
/// length `t` is `sigma^2 t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerRegime {
    mu: f64,
    sigma: f64,
}

impl WienerRegime {
    /// Requires finite `mu` and strictly positive finite `sigma`.
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParam(format!(
                "drift must be finite, got {mu}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParam(format!(
                "diffusion scale must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// An upper barrier `beta` together with the starting state `x0 < beta`.
/// Only upward crossings are represented; a downward problem is mapped
/// here by reflecting states and negating drifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier {
    beta: f64,
    x0: f64,
}

impl Barrier {
    /// Requires finite values with `beta > x0`.
    pub fn new(beta: f64, x0: f64) -> Result<Self> {
        if !(beta.is_finite() && x0.is_finite() && beta > x0) {
            return Err(Error::InvalidParam(format!(
                "barrier must satisfy beta > x0 with both finite, got beta = {beta}, x0 = {x0}"
            )));
        }
        Ok(Self { beta, x0 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Distance from start to barrier, always positive.
    pub fn gap(&self) -> f64 {
        self.beta - self.x0
    }
}

fn require_positive_time(t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        Err(Error::Domain(format!("time must be positive, got {t}")))
    } else {
        Ok(())
    }
}

/// Probability that the process crosses the barrier by time `t`:
///
/// ```text
/// G(t) = Phi(-(d - mu t)/(sigma sqrt t))
///      + exp(2 mu d / sigma^2) Phi(-(d + mu t)/(sigma sqrt t)),   d = beta - x0.
/// ```
///
/// With a large positive drift the prefactor overflows while the tail
/// underflows; the pair is combined in log space so the product survives.
/// `t = infinity` returns the limit: 1 for `mu >= 0`, else
/// `exp(2 mu d / sigma^2)`.
pub fn crossing_cdf(regime: WienerRegime, barrier: Barrier, t: f64) -> Result<f64> {
    require_positive_time(t)?;
    let (mu, sigma) = (regime.mu, regime.sigma);
    let d = barrier.gap();
    if t == f64::INFINITY {
        let limit = if mu >= 0.0 {
            1.0
        } else {
            f64::exp(2.0 * mu * d / (sigma * sigma))
        };
        return Ok(limit);
    }
    let scale = sigma * t.sqrt();
    let direct = phi(-(d - mu * t) / scale);
    let reflected = exp_phi_product(2.0 * mu * d / (sigma * sigma), -(d + mu * t) / scale);
    Ok((direct + reflected).clamp(0.0, 1.0))
}

/// First-passage density through the barrier:
///
/// ```text
/// g(t) = d / sqrt(2 pi sigma^2 t^3) * exp(-(d - mu t)^2 / (2 sigma^2 t)).
/// ```
///
/// Assembled in log space: as `t -> 0` the `t^(-3/2)` prefactor diverges
/// while the exponential vanishes faster, and the naive product is
/// `inf * 0`.
pub fn crossing_pdf(regime: WienerRegime, barrier: Barrier, t: f64) -> Result<f64> {
    require_positive_time(t)?;
    let (mu, sigma) = (regime.mu, regime.sigma);
    let d = barrier.gap();
    let dev = d - mu * t;
    let ln =
        d.ln() - sigma.ln() - LN_SQRT_2PI - 1.5 * t.ln() - dev * dev / (2.0 * sigma * sigma * t);
    Ok(f64::exp(ln))
}

/// Density at state `x <= beta` and time `t` of paths that started at
/// `x0` and have not yet touched the barrier:
///
/// ```text
/// alpha(x, t) = N(x; x0 + mu t, sigma^2 t)
///             * [1 - exp(-2 (beta - x)(beta - x0) / (sigma^2 t))].
/// ```
///
/// The bracket lies in [0, 1] and vanishes at `x = beta`; integrating
/// over `x < beta` recovers `1 - crossing_cdf(t)`.
pub fn avoiding_pdf(regime: WienerRegime, barrier: Barrier, x: f64, t: f64) -> Result<f64> {
    require_positive_time(t)?;
    if x.is_nan() || x > barrier.beta {
        return Err(Error::Domain(format!(
            "state must satisfy x <= beta, got x = {x}, beta = {}",
            barrier.beta
        )));
    }
    let (mu, sigma) = (regime.mu, regime.sigma);
    let var = sigma * sigma * t;
    let dev = x - barrier.x0 - mu * t;
    let ln_gauss = -LN_SQRT_2PI - 0.5 * var.ln() - dev * dev / (2.0 * var);
    let bracket = -f64::exp_m1(-2.0 * (barrier.beta - x) * barrier.gap() / var);
    Ok(f64::exp(ln_gauss) * bracket)
}

/// Location `c_m` of the maximum of the crossing pdf on `(0, inf)`;
/// callers clip to `min(tau, c_m)` for a finite window.
///
/// The textbook form `[-3 sigma^2 + sqrt(9 sigma^4 + 4 mu^2 d^2)]/(2 mu^2)`
/// needs a separate `mu = 0` branch (`d^2 / (3 sigma^2)`) and cancels
/// badly for small `mu`; rationalizing gives the single expression below,
/// which reproduces both branches exactly.
pub fn pdf_mode(regime: WienerRegime, barrier: Barrier) -> f64 {
    let (mu, sigma) = (regime.mu, regime.sigma);
    let d = barrier.gap();
    let s2 = sigma * sigma;
    let md = mu * d;
    2.0 * d * d / (3.0 * s2 + f64::sqrt(9.0 * s2 * s2 + 4.0 * md * md))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(value: f64, reference: f64, tol: f64) {
        let rel = ((value - reference) / reference).abs();
        assert!(
            rel < tol,
            "value {value:e} vs reference {reference:e} (rel err {rel:e})"
        );
    }

    #[test]
    fn crossing_cdf_golden_values() {
        // 40-digit arbitrary-precision references for the closed form.
        let b30 = Barrier::new(3.0, 0.0).unwrap();
        let cases = [
            (
                WienerRegime::new(1.0, 1.0).unwrap(),
                b30,
                1.0,
                0.035_527_222_829_331_42,
            ),
            (
                WienerRegime::new(1.0, 1.0).unwrap(),
                b30,
                5.0,
                0.884_371_428_553_397_9,
            ),
            (
                WienerRegime::new(-1.0, 2.0).unwrap(),
                b30,
                2.0,
                0.119_286_640_100_247_7,
            ),
            (
                WienerRegime::new(0.0, 1.0).unwrap(),
                b30,
                4.0,
                0.133_614_402_537_716_14,
            ),
        ];
        for (regime, barrier, t, want) in cases {
            assert_rel(crossing_cdf(regime, barrier, t).unwrap(), want, 1e-14);
        }
    }

    #[test]
    fn crossing_cdf_survives_huge_drift_exponent() {
        // 2 mu d / sigma^2 = 800 overflows exp on its own.
        let regime = WienerRegime::new(40.0, 1.0).unwrap();
        let barrier = Barrier::new(10.0, 0.0).unwrap();
        let got = crossing_cdf(regime, barrier, 0.1).unwrap();
        assert_rel(got, 2.012_561_676_553_529_3e-80, 1e-12);
    }

    #[test]
    fn crossing_cdf_limits() {
        let barrier = Barrier::new(3.0, 0.0).unwrap();
        let up = WienerRegime::new(1.0, 1.0).unwrap();
        assert_eq!(crossing_cdf(up, barrier, f64::INFINITY).unwrap(), 1.0);
        let down = WienerRegime::new(-1.0, 1.0).unwrap();
        let limit = crossing_cdf(down, barrier, f64::INFINITY).unwrap();
        assert_rel(limit, 0.002_478_752_176_666_358_5, 1e-15);
        // Large finite horizon approaches the same limit from below.
        let near = crossing_cdf(down, barrier, 1e9).unwrap();
        assert_rel(near, limit, 1e-9);
        assert!(near <= limit);
    }

    #[test]
    fn crossing_cdf_zero_drift_collapses_to_one_term_doubled() {
        let regime = WienerRegime::new(0.0, 1.5).unwrap();
        let barrier = Barrier::new(2.0, -1.0).unwrap();
        for t in [0.3, 1.0, 7.0] {
            let got = crossing_cdf(regime, barrier, t).unwrap();
            let want = 2.0 * phi(-barrier.gap() / (1.5 * t.sqrt()));
            assert_rel(got, want, 1e-14);
        }
    }

    #[test]
    fn crossing_pdf_golden_values_and_small_time_decay() {
        let b30 = Barrier::new(3.0, 0.0).unwrap();
        assert_rel(
            crossing_pdf(WienerRegime::new(1.0, 1.0).unwrap(), b30, 1.0).unwrap(),
            0.161_972_899_539_564_15,
            1e-14,
        );
        assert_rel(
            crossing_pdf(WienerRegime::new(-1.0, 2.0).unwrap(), b30, 2.0).unwrap(),
            0.044_347_710_458_867_02,
            1e-14,
        );
        // The essential singularity dominates the t^(-3/2) prefactor.
        let tiny = crossing_pdf(WienerRegime::new(1.0, 1.0).unwrap(), b30, 1e-6).unwrap();
        assert_eq!(tiny, 0.0);
        let small = crossing_pdf(WienerRegime::new(1.0, 1.0).unwrap(), b30, 1e-2).unwrap();
        assert!(small > 0.0 && small < 1e-190);
    }

    #[test]
    fn avoiding_pdf_golden_values_and_barrier_zero() {
        let regime = WienerRegime::new(1.0, 1.0).unwrap();
        let barrier = Barrier::new(3.0, 0.0).unwrap();
        assert_rel(
            avoiding_pdf(regime, barrier, 1.5, 1.0).unwrap(),
            0.352_021_878_451_297_8,
            1e-14,
        );
        let regime2 = WienerRegime::new(-1.0, 2.0).unwrap();
        let barrier2 = Barrier::new(3.0, 0.5).unwrap();
        assert_rel(
            avoiding_pdf(regime2, barrier2, 2.0, 2.0).unwrap(),
            0.030_483_657_842_485_155,
            1e-14,
        );
        assert_eq!(avoiding_pdf(regime, barrier, 3.0, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn avoiding_pdf_is_dominated_by_the_free_gaussian() {
        let regime = WienerRegime::new(0.5, 1.3).unwrap();
        let barrier = Barrier::new(2.0, 0.0).unwrap();
        let t = 1.7;
        let var = regime.sigma() * regime.sigma() * t;
        for i in -40..=20 {
            let x = f64::from(i) * 0.1;
            let dev = x - barrier.x0() - regime.mu() * t;
            let gauss =
                f64::exp(-dev * dev / (2.0 * var)) / f64::sqrt(2.0 * std::f64::consts::PI * var);
            let a = avoiding_pdf(regime, barrier, x, t).unwrap();
            assert!(a >= 0.0 && a <= gauss * (1.0 + 1e-14));
        }
    }

    #[test]
    fn pdf_mode_matches_both_textbook_branches() {
        // mu = 0: d^2 / (3 sigma^2).
        let flat = WienerRegime::new(0.0, 1.0).unwrap();
        let barrier = Barrier::new(3.0, 0.0).unwrap();
        assert_rel(pdf_mode(flat, barrier), 3.0, 1e-15);

        // mu != 0: [-3 sigma^2 + sqrt(9 sigma^4 + 4 mu^2 d^2)]/(2 mu^2).
        let drift = WienerRegime::new(1.25, 0.8).unwrap();
        let (mu, sigma, d) = (1.25f64, 0.8f64, 3.0f64);
        let s2 = sigma * sigma;
        let textbook =
            (-3.0 * s2 + f64::sqrt(9.0 * s2 * s2 + 4.0 * mu * mu * d * d)) / (2.0 * mu * mu);
        assert_rel(pdf_mode(drift, barrier), textbook, 1e-14);

        // Even in mu, and continuous through mu = 0.
        let perturbed = WienerRegime::new(1e-9, 1.0).unwrap();
        assert_rel(pdf_mode(perturbed, barrier), 3.0, 1e-12);
        assert_eq!(
            pdf_mode(WienerRegime::new(-1.25, 0.8).unwrap(), barrier),
            pdf_mode(drift, barrier)
        );
    }

    #[test]
    fn pdf_mode_is_a_stationary_point_of_the_crossing_pdf() {
        let regime = WienerRegime::new(1.0, 1.0).unwrap();
        let barrier = Barrier::new(3.0, 0.0).unwrap();
        let c = pdf_mode(regime, barrier);
        let h = 1e-5;
        let up = crossing_pdf(regime, barrier, c + h).unwrap();
        let down = crossing_pdf(regime, barrier, c - h).unwrap();
        let peak = crossing_pdf(regime, barrier, c).unwrap();
        let deriv = (up - down) / (2.0 * h);
        assert!(
            (deriv / peak).abs() < 1e-6,
            "relative slope {}",
            deriv / peak
        );
        assert!(up <= peak && down <= peak);
    }

    #[test]
    fn domain_errors() {
        let regime = WienerRegime::new(1.0, 1.0).unwrap();
        let barrier = Barrier::new(3.0, 0.0).unwrap();
        assert!(crossing_cdf(regime, barrier, 0.0).is_err());
        assert!(crossing_cdf(regime, barrier, -1.0).is_err());
        assert!(crossing_pdf(regime, barrier, 0.0).is_err());
        assert!(avoiding_pdf(regime, barrier, 3.1, 1.0).is_err());
        assert!(avoiding_pdf(regime, barrier, 1.0, 0.0).is_err());
        assert!(Barrier::new(1.0, 1.0).is_err());
        assert!(Barrier::new(0.0, 1.0).is_err());
        assert!(WienerRegime::new(1.0, 0.0).is_err());
        assert!(WienerRegime::new(f64::NAN, 1.0).is_err());
    }
}
