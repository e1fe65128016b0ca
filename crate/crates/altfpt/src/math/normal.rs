//! Standard-normal density, cdf, log-cdf, and a guarded
//! `exp(L) * Phi(z)` product for expressions whose factors overflow and
//! underflow separately.

use super::erf::{erfc, erfcx};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8; // ln(sqrt(2 pi))

/// Standard normal density.
pub fn phi_pdf(z: f64) -> f64 {
    f64::exp(-0.5 * z * z - LN_SQRT_2PI)
}

/// Standard normal cdf. Evaluated through `erfc`, which keeps full relative
/// accuracy in the lower tail instead of rounding to 0 near z = -8.
pub fn phi(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// Natural log of the standard normal cdf, accurate over the whole real
/// line. The lower tail uses `Phi(z) = 0.5 erfcx(-z/sqrt(2)) exp(-z^2/2)`,
/// whose scaled factor stays in (0, 1], so the log never sees an underflowed
/// zero; `ln_phi(-1000)` is about -5.0e5, not `-inf`.
pub fn ln_phi(z: f64) -> f64 {
    if z > -1.0 {
        phi(z).ln()
    } else {
        f64::ln(0.5 * erfcx(-z / SQRT_2)) - 0.5 * z * z
    }
}

/// `exp(ln_weight) * Phi(z)` computed as one exponential so that a huge
/// positive weight against a tiny tail probability neither overflows nor
/// collapses to `inf * 0 = NaN`.
pub fn exp_phi_product(ln_weight: f64, z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    f64::exp(ln_weight + ln_phi(z))
}

#[cfg(test)]
mod tests {
    use super::{exp_phi_product, ln_phi, phi, phi_pdf};

    #[test]
    fn phi_spot_values() {
        assert!((phi(0.0) - 0.5).abs() < 1e-16);
        assert!((phi(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((phi(-1.96) - 0.024997895148220435).abs() < 1e-15);
        assert!((phi(8.0) - 1.0).abs() < 1e-15);
        // Lower tail keeps relative accuracy instead of rounding to zero.
        let p = phi(-10.0);
        let want = 7.619_853_024_160_525e-24;
        assert!(((p - want) / want).abs() < 1e-14);
    }

    #[test]
    fn ln_phi_matches_40_digit_reference() {
        // Reference values computed with 40-digit arithmetic.
        let table = [
            (-5.0, -15.064998393988725),
            (-10.0, -53.231_285_150_512_47),
            (-20.0, -203.91715537109726),
            (-40.0, -804.608_442_013_753_8),
            (-100.0, -5_005.524_208_694_205),
            (-1000.0, -500007.82669481218),
        ];
        for (z, want) in table {
            let got = ln_phi(z);
            assert!(
                ((got - want) / want).abs() < 1e-13,
                "ln_phi({z}) = {got}, want {want}"
            );
        }
        // Continuity across the branch point.
        let below = ln_phi(-1.0 - 1e-12);
        let above = ln_phi(-1.0 + 1e-12);
        assert!((below - above).abs() < 1e-10);
    }

    #[test]
    fn exp_phi_product_handles_opposing_extremes() {
        // exp(600) * Phi(-40): both factors unrepresentable, product fine.
        let v = exp_phi_product(600.0, -40.0);
        assert!(v.is_finite() && v > 0.0);
        let direct = (600.0 + ln_phi(-40.0)).exp();
        assert_eq!(v, direct);
        // Moderate case agrees with the naive product.
        let naive = f64::exp(1.5) * phi(-0.3);
        assert!((exp_phi_product(1.5, -0.3) - naive).abs() < 1e-15 * naive);
    }

    #[test]
    fn pdf_spot_values() {
        assert!((phi_pdf(0.0) - 0.3989422804014327).abs() < 1e-16);
        assert!((phi_pdf(2.0) - 0.05399096651318806).abs() < 1e-16);
        assert_eq!(phi_pdf(40.0), 0.0); // underflow is harmless here
    }
}
