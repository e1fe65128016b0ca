//! Analytic bounds on the first-passage density and distribution of the
//! alternating-regime motion.
//!
//! Paths that cross before the first regime switch contribute the
//! constant-parameter crossing pdf weighted by the no-switch survival;
//! paths that switch exactly once contribute a convolution of the
//! one-switch crossing density against the sojourn law. Dropping paths
//! with two or more switches leaves guaranteed lower bounds for the pdf
//! and cdf. When the two regimes share one diffusion scale the
//! first-regime crossing cdf is additionally an upper bound for the
//! alternating cdf.

use rayon::prelude::*;

use crate::engine::{AlternatingParams, Regime};
use crate::error::{Error, Result};
use crate::math::quad::{integrate, QuadOptions};
use crate::math::{ln_phi, LN_SQRT_2PI};
use crate::wiener::{avoiding_pdf, crossing_cdf, crossing_pdf, Barrier, WienerRegime};

fn require_window(u: f64, t: f64) -> Result<()> {
    if u.is_nan() || t.is_nan() || u <= 0.0 || u >= t || !t.is_finite() {
        return Err(Error::Domain(format!(
            "switch time must satisfy 0 < u < t, got u = {u}, t = {t}"
        )));
    }
    Ok(())
}

fn require_bound_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!(
            "bound evaluation time must be finite and nonnegative, got {t}"
        )));
    }
    Ok(())
}

/// Density at `t` of crossings that switch regime exactly once, at time
/// `u`: the motion runs regime `k` over `(0, u)` without touching the
/// barrier, switches, and first crosses at `t` under the other regime.
///
/// A closed form exists (two signed Gaussian-tail terms); it is used
/// when it retains enough leading digits, and the defining integral
/// `int_(-inf)^beta g_other(beta, t-u | x) alpha_k(x, u | x0) dx` is
/// evaluated by adaptive quadrature otherwise. The quadrature route is
/// the authoritative definition; see
/// [`one_switch_density_quadrature`].
pub fn one_switch_density(k: Regime, u: f64, t: f64, params: &AlternatingParams) -> Result<f64> {
    params.validate()?;
    require_window(u, t)?;
    one_switch_inner(k, u, t, params)
}

/// The defining integral of [`one_switch_density`] evaluated by
/// adaptive quadrature, bypassing the closed form entirely. Exposed so
/// the two routes can be compared directly.
pub fn one_switch_density_quadrature(
    k: Regime,
    u: f64,
    t: f64,
    params: &AlternatingParams,
) -> Result<f64> {
    params.validate()?;
    require_window(u, t)?;
    let first = params.regime(k)?;
    let second = params.regime(k.other())?;
    one_switch_quad(first, second, params.barrier()?, u, t)
}

fn one_switch_inner(k: Regime, u: f64, t: f64, params: &AlternatingParams) -> Result<f64> {
    let first = params.regime(k)?;
    let second = params.regime(k.other())?;
    let barrier = params.barrier()?;
    match one_switch_closed(first, second, barrier, u, t) {
        Some(value) => Ok(value),
        None => one_switch_quad(first, second, barrier, u, t),
    }
}

/// Closed form: with `d = beta - x0`, `s = t - u`,
/// `V = sigma_f^2 u + sigma_s^2 s`, `M = mu_f sigma_s^2 - mu_s sigma_f^2`,
/// `r = sqrt(s / (sigma_f^2 sigma_s^2 u V))`, `c± = d sigma_s^2 ± u M`:
///
/// ```text
/// I = [ c- Phi(c- r) e^(E1) + c+ Phi(-c+ r) e^(E2) ] / sqrt(2 pi V^3)
/// E1 = -(d - mu_f u - mu_s s)^2 / (2V)
/// E2 = 2 mu_f d / sigma_f^2 - (d + mu_f u + mu_s s)^2 / (2V)
/// ```
///
/// Each term is formed as sign and log magnitude so the exponential
/// prefactor of E2 cannot overflow. Returns `None` (deferring to
/// quadrature) when the two terms cancel past nine leading digits or
/// produce anything non-finite.
fn one_switch_closed(
    first: WienerRegime,
    second: WienerRegime,
    barrier: Barrier,
    u: f64,
    t: f64,
) -> Option<f64> {
    let (mf, sf) = (first.mu(), first.sigma());
    let (ms, ss) = (second.mu(), second.sigma());
    let d = barrier.gap();
    let s = t - u;
    let sf2 = sf * sf;
    let ss2 = ss * ss;
    let v = sf2 * u + ss2 * s;
    let m = mf * ss2 - ms * sf2;
    let root = f64::sqrt(s / (sf2 * ss2 * u * v));
    let drift_sum = mf * u + ms * s;
    let e1 = -(d - drift_sum) * (d - drift_sum) / (2.0 * v);
    let e2 = 2.0 * mf * d / sf2 - (d + drift_sum) * (d + drift_sum) / (2.0 * v);
    let term = |c: f64, phi_arg: f64, e: f64| -> (f64, f64) {
        if c == 0.0 {
            (0.0, f64::NEG_INFINITY)
        } else {
            (c.signum(), c.abs().ln() + ln_phi(phi_arg) + e)
        }
    };
    let c_minus = d * ss2 - u * m;
    let c_plus = d * ss2 + u * m;
    let (sign1, l1) = term(c_minus, c_minus * root, e1);
    let (sign2, l2) = term(c_plus, -c_plus * root, e2);
    let lmax = l1.max(l2);
    if lmax == f64::NEG_INFINITY {
        return Some(0.0);
    }
    let scaled = sign1 * f64::exp(l1 - lmax) + sign2 * f64::exp(l2 - lmax);
    if !scaled.is_finite() || scaled < 1e-9 {
        return None;
    }
    let value = scaled * f64::exp(lmax - (LN_SQRT_2PI + 1.5 * v.ln()));
    value.is_finite().then_some(value)
}

fn one_switch_quad(
    first: WienerRegime,
    second: WienerRegime,
    barrier: Barrier,
    u: f64,
    t: f64,
) -> Result<f64> {
    let beta = barrier.beta();
    let s = t - u;
    // Gaussian mass below 10 standard deviations of the free motion is
    // under 1e-23, so the integrand is negligible there.
    let lower = barrier.x0() + first.mu() * u - 10.0 * first.sigma() * u.sqrt();
    if lower >= beta {
        // The entire surviving mass sits within rounding of the barrier;
        // the no-crossing probability itself is below the 10-sigma tail.
        return Ok(0.0);
    }
    let integrand = |x: f64| -> f64 {
        if x >= beta {
            return 0.0;
        }
        let a = avoiding_pdf(first, barrier, x, u).unwrap_or(0.0);
        if a == 0.0 {
            return 0.0;
        }
        let gap = match Barrier::new(beta, x) {
            Ok(b) => b,
            Err(_) => return 0.0,
        };
        a * crossing_pdf(second, gap, s).unwrap_or(0.0)
    };
    let q = integrate(
        &integrand,
        lower,
        beta,
        QuadOptions {
            abs_tol: 1e-13,
            max_depth: 48,
        },
    );
    if !q.value.is_finite() {
        return Err(Error::Domain(format!(
            "one-switch quadrature failed at u = {u}, t = {t}"
        )));
    }
    Ok(q.value.max(0.0))
}

/// Lower bound for the first-passage density at `t`, starting in regime
/// `k`: the no-switch term plus the exactly-one-switch convolution,
///
/// ```text
/// Fbar_first(t) g_first(t) + int_0^t Fbar_other(t-u) I_k(u, t) f_first(u) du.
/// ```
///
/// `t = 0` returns 0.
pub fn pdf_lower_bound(k: Regime, t: f64, params: &AlternatingParams) -> Result<f64> {
    params.validate()?;
    require_bound_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let first = params.regime(k)?;
    let barrier = params.barrier()?;
    let law_first = params.law(k);
    let law_other = params.law(k.other());
    let tail = law_first.survival(t)? * crossing_pdf(first, barrier, t)?;
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 || u >= t {
            return 0.0;
        }
        let weight = law_other.survival(t - u).unwrap_or(0.0) * law_first.pdf(u).unwrap_or(0.0);
        if weight == 0.0 {
            return 0.0;
        }
        weight * one_switch_inner(k, u, t, params).unwrap_or(f64::NAN)
    };
    let q = integrate(
        &integrand,
        0.0,
        t,
        QuadOptions {
            abs_tol: 1e-9,
            max_depth: 48,
        },
    );
    if !q.value.is_finite() {
        return Err(Error::Domain(format!(
            "pdf bound quadrature failed at t = {t}"
        )));
    }
    Ok((tail + q.value).max(0.0))
}

/// Lower bound for the first-passage cdf at `t`, starting in regime `k`:
///
/// ```text
/// Fbar_first(t) G_first(t) + int_0^t G_first(u) f_first(u) du.
/// ```
///
/// Both terms average the nondecreasing `G_first`, so the bound is
/// nondecreasing in `t` and lies in [0, 1]. `t = 0` returns 0.
pub fn cdf_lower_bound(k: Regime, t: f64, params: &AlternatingParams) -> Result<f64> {
    params.validate()?;
    require_bound_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let first = params.regime(k)?;
    let barrier = params.barrier()?;
    let law_first = params.law(k);
    let tail = law_first.survival(t)? * crossing_cdf(first, barrier, t)?;
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        crossing_cdf(first, barrier, u).unwrap_or(f64::NAN) * law_first.pdf(u).unwrap_or(f64::NAN)
    };
    let q = integrate(
        &integrand,
        0.0,
        t,
        QuadOptions {
            abs_tol: 1e-9,
            max_depth: 48,
        },
    );
    if !q.value.is_finite() {
        return Err(Error::Domain(format!(
            "cdf bound quadrature failed at t = {t}"
        )));
    }
    Ok((tail + q.value).clamp(0.0, 1.0))
}

/// Upper bound for the first-passage cdf, valid for either starting
/// regime but only under the hypothesis `sigma1 == sigma2` (exactly):
/// the crossing cdf of regime 1 alone. With unequal scales the bound is
/// not claimed and an error is returned.
pub fn cdf_upper_bound(t: f64, params: &AlternatingParams) -> Result<f64> {
    params.validate()?;
    if params.sigma1 != params.sigma2 {
        return Err(Error::UnequalSigmas {
            sigma1: params.sigma1,
            sigma2: params.sigma2,
        });
    }
    require_bound_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    crossing_cdf(params.regime(Regime::One)?, params.barrier()?, t)
}

/// Which bound a curve represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    PdfLower(Regime),
    CdfLower(Regime),
    CdfUpper,
}

impl BoundKind {
    /// Column name used in CSV output, with the regime index inlined.
    pub fn column_name(&self) -> String {
        match self {
            Self::PdfLower(k) => format!("pdf_lower_{}", k.index()),
            Self::CdfLower(k) => format!("cdf_lower_{}", k.index()),
            Self::CdfUpper => "cdf_upper".into(),
        }
    }
}

/// One bound evaluated over an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: BoundKind,
}

/// Evaluates a bound over a grid (in parallel; the points are
/// independent) and checks the structural invariants: pdf bounds are
/// nonnegative, cdf bounds lie in [0, 1] and never decrease beyond
/// quadrature jitter. An invariant violation indicates a quadrature
/// failure and is reported as an error rather than smoothed over.
pub fn evaluate_bound_curve(
    kind: BoundKind,
    grid: &[f64],
    params: &AlternatingParams,
) -> Result<BoundCurve> {
    params.validate()?;
    if grid.is_empty() {
        return Err(Error::Domain("bound grid must be nonempty".into()));
    }
    for pair in grid.windows(2) {
        // partial_cmp also rejects NaN entries, which compare as None.
        if pair[1].partial_cmp(&pair[0]) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!(
                "bound grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    require_bound_time(grid[0])?;
    require_bound_time(*grid.last().expect("nonempty"))?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| match kind {
            BoundKind::PdfLower(k) => pdf_lower_bound(k, t, params),
            BoundKind::CdfLower(k) => cdf_lower_bound(k, t, params),
            BoundKind::CdfUpper => cdf_upper_bound(t, params),
        })
        .collect::<Result<_>>()?;
    match kind {
        BoundKind::PdfLower(_) => {
            if values.iter().any(|v| *v < 0.0) {
                return Err(Error::Domain("pdf bound produced a negative value".into()));
            }
        }
        BoundKind::CdfLower(_) | BoundKind::CdfUpper => {
            for (i, pair) in values.windows(2).enumerate() {
                if pair[1] < pair[0] - 1e-9 {
                    return Err(Error::Domain(format!(
                        "cdf bound decreased from {} to {} at grid index {}",
                        pair[0],
                        pair[1],
                        i + 1
                    )));
                }
            }
        }
    }
    Ok(BoundCurve {
        grid: grid.to_vec(),
        values,
        kind,
    })
}
