//! Quarter-turn trigonometry kernel.
//!
//! Every oscillatory factor in this crate has a phase that is naturally
//! expressed in quarter turns: the Fresnel chirp e^{iπu²/2} has phase
//! u² quarters, and carrier phases k·y are converted once. Working in
//! quarters makes the range reduction a float subtraction (exact by
//! Sterbenz's lemma) plus one multiplication by π/2, so sine and cosine
//! come from short polynomials on [-π/4, π/4] instead of the generic
//! large-argument reduction path, which dominates the flow-integrator
//! profile otherwise.

use std::f64::consts::FRAC_PI_2;

/// sin and cos of θ = q·π/2.
///
/// Accurate to ~5e-14 absolute relative to the exact phase q·π/2 for
/// any representable q: the quadrant split q - j is exact and the only
/// error sources are the π/2 product rounding and the truncated Taylor
/// polynomials.
#[inline]
pub(crate) fn sin_cos_quarters(q: f64) -> (f64, f64) {
    let j = (q + 0.5).floor();
    let t = (q - j) * FRAC_PI_2;

    let t2 = t * t;
    // sin(t)/t and cos(t) Taylor polynomials; |t| ≤ π/4 keeps the
    // dropped t^15 / t^16 terms below 3e-14.
    let s = t * (1.0
        + t2 * (-1.0 / 6.0
            + t2 * (1.0 / 120.0
                + t2 * (-1.0 / 5040.0
                    + t2 * (1.0 / 362_880.0
                        + t2 * (-1.0 / 39_916_800.0 + t2 * (1.0 / 6_227_020_800.0)))))));
    let c = 1.0
        + t2 * (-0.5
            + t2 * (1.0 / 24.0
                + t2 * (-1.0 / 720.0
                    + t2 * (1.0 / 40_320.0
                        + t2 * (-1.0 / 3_628_800.0
                            + t2 * (1.0 / 479_001_600.0
                                + t2 * (-1.0 / 87_178_291_200.0)))))));

    match (j as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}
