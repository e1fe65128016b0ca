//! Event-driven simulation of the first-passage time of a Brownian
//! motion whose drift and variance alternate between two regimes at the
//! epochs of an alternating renewal process.
//!
//! The simulator touches the path only at switching instants. Over one
//! inter-switch segment the motion is a constant-parameter Wiener
//! process, so the segment either crosses the barrier (with the known
//! probability `G`) or ends at a state drawn from the barrier-avoiding
//! density; both conditional draws are exact, so the only approximations
//! anywhere are the documented tolerance branches.

use rand::distr::Open01;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::SwitchingLaw;
use crate::samplers::{sample_avoiding_state, sample_crossing_time, Tolerances};
use crate::wiener::{crossing_cdf, Barrier, WienerRegime};

/// Number of independent generator streams a batch is split across.
/// Fixed (not machine-dependent) so batch output is a pure function of
/// `(params, n, seed)` regardless of thread count.
pub const BATCH_STREAMS: u64 = 64;

/// Which of the two regimes the motion is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Regime {
    One,
    Two,
}

impl Regime {
    /// The other regime; switching epochs always alternate.
    pub fn other(self) -> Self {
        match self {
            Self::One => Self::Two,
            Self::Two => Self::One,
        }
    }

    /// 1-based index, matching the usual subscript notation.
    pub fn index(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

impl TryFrom<u8> for Regime {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::InvalidParam(format!(
                "regime must be 1 or 2, got {v}"
            ))),
        }
    }
}

impl From<Regime> for u8 {
    fn from(r: Regime) -> u8 {
        r.index()
    }
}

/// Full parameter set of the alternating model.
///
/// Regime 1 has drift `mu1` and scale `sigma1` and sojourns distributed
/// by `law_u`; regime 2 has `mu2`, `sigma2`, `law_d`. The analytic
/// bounds are stated for the convention `mu1 >= 0 >= mu2` (regime 1
/// pushes toward the barrier, regime 2 away); the simulator itself is
/// exact for any finite drifts, so the convention is documented rather
/// than enforced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternatingParams {
    pub mu1: f64,
    pub sigma1: f64,
    pub mu2: f64,
    pub sigma2: f64,
    pub x0: f64,
    pub beta: f64,
    pub initial_regime: Regime,
    pub law_u: SwitchingLaw,
    pub law_d: SwitchingLaw,
    pub t_max: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl AlternatingParams {
    /// Checks every structural invariant: positive finite scales, finite
    /// drifts, `beta > x0`, positive finite horizon, valid laws and
    /// tolerances.
    pub fn validate(&self) -> Result<()> {
        WienerRegime::new(self.mu1, self.sigma1)?;
        WienerRegime::new(self.mu2, self.sigma2)?;
        Barrier::new(self.beta, self.x0)?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidParam(format!(
                "t_max must be positive and finite, got {}",
                self.t_max
            )));
        }
        self.law_u.validate()?;
        self.law_d.validate()?;
        self.tolerances.validate()
    }

    /// Drift/scale pair of the given regime.
    pub fn regime(&self, k: Regime) -> Result<WienerRegime> {
        match k {
            Regime::One => WienerRegime::new(self.mu1, self.sigma1),
            Regime::Two => WienerRegime::new(self.mu2, self.sigma2),
        }
    }

    /// Sojourn law of the given regime.
    pub fn law(&self, k: Regime) -> &SwitchingLaw {
        match k {
            Regime::One => &self.law_u,
            Regime::Two => &self.law_d,
        }
    }

    /// Barrier paired with the starting state.
    pub fn barrier(&self) -> Result<Barrier> {
        Barrier::new(self.beta, self.x0)
    }
}

/// Result of one simulated path: the crossing time when the barrier was
/// reached within the horizon, otherwise censoring at the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FptOutcome {
    /// Barrier reached at this time, in `(0, t_max]`.
    Crossed(f64),
    /// No crossing by `t_max`.
    Censored,
}

impl FptOutcome {
    pub fn is_crossed(self) -> bool {
        matches!(self, Self::Crossed(_))
    }

    pub fn crossed_time(self) -> Option<f64> {
        match self {
            Self::Crossed(t) => Some(t),
            Self::Censored => None,
        }
    }
}

/// Simulates one first-passage time.
///
/// Loop per segment, starting from `(x0, t = 0, initial_regime)`:
/// censored once the segment start passes `t_max`; draw the sojourn
/// `tau`; compute the segment crossing probability `p`; with
/// probability `p` the path crosses, and the exact conditional crossing
/// time is added to the clock; otherwise the exact conditional endstate
/// is drawn, the clock advances by `tau`, and the regime flips.
/// Crossing probabilities below `eps1` skip straight to the endstate
/// draw. A crossing that lands beyond the horizon is reported as
/// censored, keeping every reported time within `(0, t_max]`.
pub fn simulate_fpt<R: Rng + ?Sized>(
    params: &AlternatingParams,
    rng: &mut R,
) -> Result<FptOutcome> {
    params.validate()?;
    simulate_fpt_prevalidated(params, rng)
}

/// Same loop without re-validating; batch simulation validates once.
fn simulate_fpt_prevalidated<R: Rng + ?Sized>(
    params: &AlternatingParams,
    rng: &mut R,
) -> Result<FptOutcome> {
    let regimes = [params.regime(Regime::One)?, params.regime(Regime::Two)?];
    let tol = params.tolerances;
    let mut x = params.x0;
    let mut t = 0.0_f64;
    let mut k = params.initial_regime;
    loop {
        if t > params.t_max {
            return Ok(FptOutcome::Censored);
        }
        let tau = params.law(k).sample(rng);
        let regime = regimes[(k.index() - 1) as usize];
        let barrier = Barrier::new(params.beta, x)?;
        let p = crossing_cdf(regime, barrier, tau)?;
        if p >= tol.eps1 {
            let u: f64 = rng.sample(Open01);
            if u <= p {
                let theta = sample_crossing_time(regime, params.beta, x, tau, tol.eps2, rng)?;
                let crossing = t + theta;
                return Ok(if crossing <= params.t_max {
                    FptOutcome::Crossed(crossing)
                } else {
                    FptOutcome::Censored
                });
            }
        }
        x = sample_avoiding_state(regime, params.beta, x, tau, tol.eps3, rng)?;
        t += tau;
        k = k.other();
    }
}

/// Simulates `n` independent first-passage times, deterministically in
/// `(params, n, seed)`.
///
/// The batch is split into [`BATCH_STREAMS`] contiguous index ranges,
/// each driven by its own counter-based generator stream derived from
/// the seed; ranges run in parallel and are concatenated in index
/// order, so the output is identical whatever the thread count.
pub fn simulate_batch(params: &AlternatingParams, n: u64, seed: u64) -> Result<Vec<FptOutcome>> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidParam(
            "sample count must be at least 1".into(),
        ));
    }
    let base = n / BATCH_STREAMS;
    let rem = n % BATCH_STREAMS;
    let per_stream: Vec<(u64, u64)> = (0..BATCH_STREAMS)
        .map(|i| (i, base + u64::from(i < rem)))
        .collect();
    let chunks: Vec<Vec<FptOutcome>> = per_stream
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut out = Vec::with_capacity(count as usize);
            for _ in 0..count {
                out.push(simulate_fpt_prevalidated(params, &mut rng)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::phi;

    fn wiener_equivalent_params() -> AlternatingParams {
        AlternatingParams {
            mu1: 1.0,
            sigma1: 1.0,
            mu2: 1.0,
            sigma2: 1.0,
            x0: 0.0,
            beta: 1.0,
            initial_regime: Regime::One,
            law_u: SwitchingLaw::exponential(1.0).unwrap(),
            law_d: SwitchingLaw::exponential(1.0).unwrap(),
            t_max: 5.0,
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn outcomes_respect_the_horizon() {
        let params = wiener_equivalent_params();
        let outcomes = simulate_batch(&params, 500, 42).unwrap();
        assert_eq!(outcomes.len(), 500);
        for o in &outcomes {
            if let FptOutcome::Crossed(t) = o {
                assert!(
                    *t > 0.0 && *t <= params.t_max,
                    "crossing time {t} out of range"
                );
            }
        }
        assert!(outcomes.iter().any(|o| o.is_crossed()));
    }

    #[test]
    fn batch_is_deterministic_and_exact_in_length() {
        let params = wiener_equivalent_params();
        // 130 is deliberately not a multiple of the stream count.
        let a = simulate_batch(&params, 130, 7).unwrap();
        let b = simulate_batch(&params, 130, 7).unwrap();
        assert_eq!(a.len(), 130);
        assert_eq!(a, b);
        let c = simulate_batch(&params, 130, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_count_and_invalid_params_are_rejected() {
        let params = wiener_equivalent_params();
        assert!(simulate_batch(&params, 0, 1).is_err());
        let mut bad = wiener_equivalent_params();
        bad.sigma1 = 0.0;
        assert!(simulate_batch(&bad, 10, 1).is_err());
        let mut bad = wiener_equivalent_params();
        bad.beta = bad.x0;
        assert!(simulate_batch(&bad, 10, 1).is_err());
        let mut bad = wiener_equivalent_params();
        bad.t_max = 0.0;
        assert!(simulate_batch(&bad, 10, 1).is_err());
    }

    #[test]
    fn identical_regimes_reduce_to_a_single_wiener_process() {
        // With both regimes equal the switching mechanism is invisible
        // and the crossing cdf is the closed form; loose 4.5-sigma smoke
        // check here, the full-size comparison lives in the acceptance
        // suite.
        let params = wiener_equivalent_params();
        let n = 4000_u64;
        let outcomes = simulate_batch(&params, n, 1234).unwrap();
        for t_check in [0.5_f64, 1.0, 2.0] {
            let want = {
                // d = 1, mu = 1, sigma = 1.
                let s = t_check.sqrt();
                phi(-(1.0 - t_check) / s) + f64::exp(2.0) * phi(-(1.0 + t_check) / s)
            };
            let hits = outcomes
                .iter()
                .filter(|o| matches!(o, FptOutcome::Crossed(t) if *t <= t_check))
                .count();
            let got = hits as f64 / n as f64;
            let se = (want * (1.0 - want) / n as f64).sqrt();
            assert!(
                (got - want).abs() < 4.5 * se,
                "t = {t_check}: empirical {got} vs exact {want} (se {se})"
            );
        }
    }

    #[test]
    fn regime_serde_uses_one_based_indices() {
        assert_eq!(serde_json::to_string(&Regime::Two).unwrap(), "2");
        let r: Regime = serde_json::from_str("1").unwrap();
        assert_eq!(r, Regime::One);
        assert!(serde_json::from_str::<Regime>("3").is_err());
    }

    #[test]
    fn params_serde_round_trip() {
        let params = wiener_equivalent_params();
        let text = serde_json::to_string_pretty(&params).unwrap();
        let back: AlternatingParams = serde_json::from_str(&text).unwrap();
        assert_eq!(params, back);
        // Tolerances may be omitted entirely and fall back to defaults.
        let slim = r#"{
            "mu1": 1.0, "sigma1": 1.0, "mu2": -1.0, "sigma2": 1.0,
            "x0": 0.0, "beta": 3.0, "initial_regime": 2,
            "law_u": {"type": "exponential", "rate": 0.5},
            "law_d": {"type": "exponential", "rate": 2.0},
            "t_max": 20.0
        }"#;
        let parsed: AlternatingParams = serde_json::from_str(slim).unwrap();
        assert_eq!(parsed.tolerances, Tolerances::default());
        assert_eq!(parsed.initial_regime, Regime::Two);
    }
}
