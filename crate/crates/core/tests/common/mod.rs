//! Shared test oracles, independent of the library's evaluation paths.
//!
//! * `fresnel_series_oracle` — defining power series of the Fresnel
//!   integrals summed to 1e-14 term tolerance (trustworthy for |u| ≲ 3,
//!   where f64 cancellation stays below ~1e-11).
//! * `adaptive_simpson` — classic recursive Simpson integration with a
//!   Richardson error estimate, used to evaluate the defining integrals
//!   directly for larger arguments and for the slit diffraction
//!   integral. The library itself never uses Simpson quadrature, so the
//!   comparison routes stay independent.

#![allow(dead_code)]

use num_complex::Complex64;
use slitflow::{GratingGeometry, IncidentProfile, Slit, WaveParameters};
use std::f64::consts::{FRAC_PI_4, PI};

/// Standard scenario of the figure reproductions: λ = 532.5 nm,
/// d = 0.25 mm, δ = 0.1 mm, L = 558 mm.
pub fn standard_scenario() -> (WaveParameters, GratingGeometry) {
    (
        WaveParameters::new(532.5e-9, 0.558).unwrap(),
        GratingGeometry::new(0.25e-3, 0.1e-3).unwrap(),
    )
}

/// Uniform grid over [lo, hi] with n points.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Power-series evaluation of C(u) + i S(u), term tolerance 1e-14.
///
/// Panics when asked outside its trust region: beyond |u| ≈ 3 the
/// alternating terms grow large enough that f64 cancellation exceeds
/// the oracle's accuracy claim.
pub fn fresnel_series_oracle(u: f64) -> Complex64 {
    assert!(u.abs() <= 3.0, "series oracle trust region is |u| <= 3");
    let t = 0.5 * PI * u * u;
    let t2 = t * t;
    let mut c_term = u;
    let mut c_sum = c_term;
    let mut s_term = u * t / 3.0;
    let mut s_sum = s_term;
    for n in 1..200 {
        let n2 = (2 * n) as f64;
        let n4 = (4 * n) as f64;
        c_term *= -t2 / ((n2 - 1.0) * n2) * ((n4 - 3.0) / (n4 + 1.0));
        c_sum += c_term;
        s_term *= -t2 / (n2 * (n2 + 1.0)) * ((n4 - 1.0) / (n4 + 3.0));
        s_sum += s_term;
        if c_term.abs() <= 1e-14 * c_sum.abs().max(1e-3)
            && s_term.abs() <= 1e-14 * s_sum.abs().max(1e-3)
        {
            break;
        }
    }
    Complex64::new(c_sum, s_sum)
}

/// Recursive adaptive Simpson integration of a complex-valued function.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    let err = refined - whole;
    if depth == 0 || err.norm() <= 15.0 * tol {
        refined + err / 15.0
    } else {
        simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Oscillation-aware adaptive quadrature: the interval is pre-split so
/// each panel holds at most about one oscillation, then each panel is
/// integrated adaptively. Panel tolerances assume root-sum-square
/// accumulation of the per-panel errors.
pub fn oscillatory_quadrature<F>(f: &F, a: f64, b: f64, cycles: f64, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let panels = (cycles.abs().ceil() as usize + 4).min(40_000);
    let panel_tol = tol / (panels as f64).sqrt();
    let width = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let hi = if p + 1 == panels { b } else { lo + width };
        acc += adaptive_simpson(f, lo, hi, panel_tol);
    }
    acc
}

/// Quadrature evaluation of C(u) + i S(u) from the defining integrals.
pub fn fresnel_quadrature_oracle(u: f64) -> Complex64 {
    if u == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let cycles = u * u / 4.0;
    let value = oscillatory_quadrature(
        &|t| Complex64::from_polar(1.0, 0.5 * PI * t * t),
        0.0,
        u.abs(),
        cycles,
        1e-12,
    );
    if u < 0.0 {
        -value
    } else {
        value
    }
}

/// Cumulative quadrature oracle for a dense non-negative sweep: returns
/// C + iS at each of the (sorted, non-negative) arguments by integrating
/// segment by segment, so a whole sweep costs one pass over [0, max].
pub fn fresnel_oracle_sweep(args: &[f64]) -> Vec<Complex64> {
    let chirp = |t: f64| Complex64::from_polar(1.0, 0.5 * PI * t * t);
    let mut out = Vec::with_capacity(args.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = 0.0;
    for &u in args {
        assert!(u >= prev, "sweep arguments must be sorted and non-negative");
        if u > prev {
            let cycles = (u * u - prev * prev) / 4.0;
            acc += oscillatory_quadrature(&chirp, prev, u, cycles, 1e-13);
            prev = u;
        }
        out.push(acc);
    }
    out
}

/// Direct quadrature of the slit diffraction integral
///
/// ψᵢ(x, y) = √(k/2πy) e^{-iπ/4} e^{iky} ∫_slit env(x') e^{ik(x-x')²/2y} dx'.
pub fn slit_wave_oracle(
    slit: Slit,
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
) -> Complex64 {
    let k = wave.wavenumber;
    let (a, b) = grating.slit_interval(slit);
    // Worst-case local phase rate bounds the oscillation count.
    let max_rate = k * (x - a).abs().max((x - b).abs()) / y;
    let cycles = max_rate * (b - a) / (2.0 * PI);
    let integral = oscillatory_quadrature(
        &|xp| {
            let phase = k * (x - xp) * (x - xp) / (2.0 * y);
            Complex64::from_polar(profile.envelope(xp), phase)
        },
        a,
        b,
        cycles,
        1e-17,
    );
    // Phase factors multiplied separately: folding -π/4 into the large
    // k·y argument would cost ~ulp(k·y) of phase accuracy.
    let prefactor = Complex64::from_polar((k / (2.0 * PI * y)).sqrt(), -FRAC_PI_4)
        * Complex64::from_polar(1.0, k * y);
    prefactor * integral
}

/// Deterministic low-discrepancy-ish point set for oracle sweeps,
/// decoupled from the library's SplitMix generator.
pub fn halton_points(n: usize) -> Vec<(f64, f64)> {
    fn radical_inverse(base: u64, mut i: u64) -> f64 {
        let mut f = 1.0;
        let mut r = 0.0;
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    }
    (0..n)
        .map(|i| (radical_inverse(2, i as u64 + 1), radical_inverse(3, i as u64 + 1)))
        .collect()
}

/// L1 distance between two discrete probability vectors.
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}
