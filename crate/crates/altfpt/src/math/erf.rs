//! Error function, complementary error function, and the scaled
//! complement `erfcx(x) = exp(x^2) erfc(x)`.
//!
//! The `erf`/`erfc` pair is a Rust transcription of the classic FreeBSD
//! `msun` routines (the same code underlying Go's `math.Erf`). The scaled
//! variant reuses the identical rational approximations: for x >= 1.25 the
//! original code evaluates `erfc(x) = exp(-x^2 - 0.5625 + R/S) / x`, so the
//! `exp(-x^2)` factor cancels exactly and `erfcx(x) = exp(R/S - 0.5625) / x`
//! never overflows. `erfcx` is what makes far-tail normal quantities
//! representable: `Phi(-z) = 0.5 erfcx(z/sqrt(2)) exp(-z^2/2)` splits into a
//! moderate factor and an explicit exponent.
//
// The original C code and the long comment below are from FreeBSD's
// /usr/src/lib/msun/src/s_erf.c and came with this notice:
//
// ====================================================
// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//
// Developed at SunPro, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this
// software is freely granted, provided that this notice
// is preserved.
// ====================================================

const ERX: f64 = 8.450_629_115_104_675e-1;

// Coefficients for approximation to erf in [0, 0.84375].
const EFX: f64 = 1.283_791_670_955_126e-1;
const EFX8: f64 = 1.027_033_336_764_100_7;
const PP0: f64 = 1.283_791_670_955_125_6e-1;
const PP1: f64 = -3.250_421_072_470_015e-1;
const PP2: f64 = -2.848_174_957_559_851e-2;
const PP3: f64 = -5.770_270_296_489_442e-3;
const PP4: f64 = -2.376_301_665_665_016_3e-5;
const QQ1: f64 = 3.979_172_239_591_553_5e-1;
const QQ2: f64 = 6.502_224_998_876_73e-2;
const QQ3: f64 = 5.081_306_281_875_766e-3;
const QQ4: f64 = 1.324_947_380_043_216_4e-4;
const QQ5: f64 = -3.960_228_278_775_368e-6;

// Coefficients for approximation to erf in [0.84375, 1.25].
const PA0: f64 = -2.362_118_560_752_659_4e-3;
const PA1: f64 = 4.148_561_186_837_483_3e-1;
const PA2: f64 = -3.722_078_760_357_013e-1;
const PA3: f64 = 3.183_466_199_011_617_5e-1;
const PA4: f64 = -1.108_946_942_823_966_8e-1;
const PA5: f64 = 3.547_830_432_561_823_6e-2;
const PA6: f64 = -2.166_375_594_868_791e-3;
const QA1: f64 = 1.064_208_804_008_442_3e-1;
const QA2: f64 = 5.403_979_177_021_71e-1;
const QA3: f64 = 7.182_865_441_419_627e-2;
const QA4: f64 = 1.261_712_198_087_616_4e-1;
const QA5: f64 = 1.363_708_391_202_905e-2;
const QA6: f64 = 1.198_449_984_679_910_7e-2;

// Coefficients for approximation to erfc in [1.25, 1/0.35].
const RA0: f64 = -9.864_944_034_847_148e-3;
const RA1: f64 = -6.938_585_727_071_818e-1;
const RA2: f64 = -1.055_862_622_532_329_1e1;
const RA3: f64 = -6.237_533_245_032_600_6e1;
const RA4: f64 = -1.623_966_694_625_734_7e2;
const RA5: f64 = -1.846_050_929_067_110_4e2;
const RA6: f64 = -8.128_743_550_630_66e1;
const RA7: f64 = -9.814_329_344_169_145;
const SA1: f64 = 1.965_127_166_743_925_7e1;
const SA2: f64 = 1.376_577_541_435_190_4e2;
const SA3: f64 = 4.345_658_774_752_292_3e2;
const SA4: f64 = 6.453_872_717_332_679e2;
const SA5: f64 = 4.290_081_400_275_678_3e2;
const SA6: f64 = 1.086_350_055_417_794_4e2;
const SA7: f64 = 6.570_249_770_319_282;
const SA8: f64 = -6.042_441_521_485_81e-2;

// Coefficients for approximation to erfc in [1/0.35, 28].
const RB0: f64 = -9.864_942_924_700_1e-3;
const RB1: f64 = -7.992_832_376_805_23e-1;
const RB2: f64 = -1.775_795_491_775_475_2e1;
const RB3: f64 = -1.606_363_848_558_219_2e2;
const RB4: f64 = -6.375_664_433_683_896e2;
const RB5: f64 = -1.025_095_131_611_077_2e3;
const RB6: f64 = -4.835_191_916_086_514e2;
const SB1: f64 = 3.033_806_074_348_246e1;
const SB2: f64 = 3.257_925_129_965_739e2;
const SB3: f64 = 1.536_729_586_084_437e3;
const SB4: f64 = 3.199_858_219_508_595_5e3;
const SB5: f64 = 2.553_050_406_433_164_4e3;
const SB6: f64 = 4.745_285_412_069_553_7e2;
const SB7: f64 = -2.244_095_244_658_582e1;

const VERY_TINY: f64 = 2.848094538889218e-306;
const TINY: f64 = 1.0 / ((1u64 << 56) as f64); // 2^-56
const SMALL: f64 = 1.0 / ((1u64 << 28) as f64); // 2^-28

/// Rational tail approximation `R/S` in `s = 1/x^2`, shared by the three
/// tail evaluators. Valid for x >= 1.25.
fn tail_ratio(x: f64) -> f64 {
    let s = 1.0 / (x * x);
    if x < 1.0 / 0.35 {
        let r =
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))));
        let q = 1.0
            + s * (SA1
                + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))));
        r / q
    } else {
        let r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))));
        let q =
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))));
        r / q
    }
}

/// `exp(-x^2 - 0.5625 + R/S)` evaluated with the split-precision trick that
/// keeps the large `-x^2` exponent accurate.
fn tail_exp(x: f64) -> f64 {
    // Truncate x to pseudo-single precision so -z*z is exact, then correct.
    let z = f64::from_bits(f64::to_bits(x) & 0xffff_ffff_0000_0000);
    f64::exp(-z * z - 0.5625) * f64::exp((z - x) * (z + x) + tail_ratio(x))
}

/// The error function `erf(x) = (2/sqrt(pi)) * integral of exp(-t^2) from 0 to x`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return -1.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    let value = if x < 0.84375 {
        if x < SMALL {
            if x < VERY_TINY {
                0.125 * (8.0 * x + EFX8 * x) // avoid spurious underflow
            } else {
                x + EFX * x
            }
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            x + x * (r / s)
        }
    } else if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        ERX + p / q
    } else if x >= 6.0 {
        1.0
    } else {
        1.0 - tail_exp(x) / x
    };
    if sign {
        -value
    } else {
        value
    }
}

/// The complementary error function `erfc(x) = 1 - erf(x)`, with full
/// relative accuracy in the decaying tail (down to about 26.5 before
/// underflow).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let ax = x.abs();
    if ax < 0.84375 {
        let temp = if ax < TINY {
            ax
        } else {
            let z = ax * ax;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if ax < 0.25 {
                ax + ax * y
            } else {
                0.5 + (ax * y + (ax - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if ax < 1.25 {
        let s = ax - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if ax < 28.0 {
        if sign && ax > 6.0 {
            return 2.0;
        }
        let r = tail_exp(ax) / ax;
        return if sign { 2.0 - r } else { r };
    }
    if sign {
        2.0
    } else {
        0.0
    }
}

/// Scaled complementary error function `erfcx(x) = exp(x^2) erfc(x)`.
///
/// For x >= 0 the result lies in (0, 1] and decays like `1/(x sqrt(pi))`
/// without ever underflowing, which is what tail-safe normal computations
/// need. For negative x the `exp(x^2)` factor is real growth; the value
/// overflows to infinity once x < -26.6 or so.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        // erfc(x) = 2 - erfc(-x), so erfcx(x) = 2 exp(x^2) - erfcx(-x).
        return 2.0 * f64::exp(x * x) - erfcx(-x);
    }
    if x < 1.25 {
        return f64::exp(x * x) * erfc(x);
    }
    if x < 28.0 {
        // The exp(-x^2) factor of the tail form cancels exactly.
        return f64::exp(tail_ratio(x) - 0.5625) / x;
    }
    // Asymptotic series erfcx(x) ~ (1/(x sqrt(pi))) sum (-1)^n (2n-1)!!/(2x^2)^n;
    // at x = 28 eight terms already reach full double precision.
    let inv2x2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=8u32 {
        term *= -(2.0 * f64::from(n) - 1.0) * inv2x2;
        sum += term;
    }
    sum / (x * std::f64::consts::PI.sqrt())
}
