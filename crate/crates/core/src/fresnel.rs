//! Fresnel cosine and sine integrals.
//!
//! `fresnel_cs(u)` evaluates `C(u) + i S(u)` with the standard
//! normalization
//!
//! ```text
//! C(u) = ∫₀ᵘ cos(π t²/2) dt,   S(u) = ∫₀ᵘ sin(π t²/2) dt.
//! ```
//!
//! Three regimes keep the absolute error below 1e-10 over |u| ≤ 50
//! (in practice well below 1e-12):
//!
//! * |u| ≤ 2.5 — defining power series, which converges quickly and
//!   loses at most a few ulps to cancellation in this range;
//! * 2.5 < |u| < 4.5 — auxiliary functions f, g from a Chebyshev fit of
//!   the convergent steepest-descent integral (the plain asymptotic
//!   series is ~1e-5 at u = 2.5, far short of the accuracy target);
//! * |u| ≥ 4.5 — optimally truncated asymptotic series for f and g.
//!
//! The auxiliary decomposition is
//!
//! ```text
//! C(u) = 1/2 + f(u) sin(πu²/2) − g(u) cos(πu²/2)
//! S(u) = 1/2 − f(u) cos(πu²/2) − g(u) sin(πu²/2)
//! ```
//!
//! and both `C` and `S` are odd, which handles negative arguments.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::Error;
use crate::gauss;
use crate::Result;

/// Upper edge of the power-series range.
const SERIES_LIMIT: f64 = 2.5;
/// Lower edge of the pure asymptotic range.
const ASYMPTOTIC_LIMIT: f64 = 4.5;
/// Chebyshev fit order for the auxiliary functions on the middle band.
const CHEB_ORDER: usize = 32;

/// Fresnel integrals `C(u) + i S(u)`.
///
/// Total over finite arguments; a NaN or infinite input is rejected.
pub fn fresnel_cs(u: f64) -> Result<Complex64> {
    if !u.is_finite() {
        return Err(Error::NonFiniteArgument("fresnel_cs argument"));
    }
    let a = u.abs();
    let value = if a <= SERIES_LIMIT {
        series_cs(a)
    } else {
        let (f, g) = if a < ASYMPTOTIC_LIMIT {
            cheb_table().eval(a)
        } else {
            asymptotic_fg(a)
        };
        let (sin_t, cos_t) = half_square_phase(a);
        Complex64::new(
            0.5 + f * sin_t - g * cos_t,
            0.5 - f * cos_t - g * sin_t,
        )
    };
    Ok(if u < 0.0 { -value } else { value })
}

/// sin and cos of πu²/2: the chirp phase is u² quarter turns, with u²
/// accurate to its own ulp.
pub(crate) fn half_square_phase(u: f64) -> (f64, f64) {
    crate::trig::sin_cos_quarters(u * u)
}

/// Fresnel integral together with the chirp e^{iπu²/2} = dF/du at the
/// same argument. The auxiliary branches need the chirp phase anyway,
/// so the slit-field hot path gets both for one trigonometric
/// evaluation. The argument must be finite.
pub(crate) fn fresnel_cs_with_chirp(u: f64) -> (Complex64, Complex64) {
    let a = u.abs();
    let (sin_t, cos_t) = half_square_phase(a);
    let chirp = Complex64::new(cos_t, sin_t);
    let value = if a <= SERIES_LIMIT {
        series_cs(a)
    } else {
        let (f, g) = if a < ASYMPTOTIC_LIMIT {
            cheb_table().eval(a)
        } else {
            asymptotic_fg(a)
        };
        Complex64::new(
            0.5 + f * sin_t - g * cos_t,
            0.5 - f * cos_t - g * sin_t,
        )
    };
    // Both C and S are odd; the chirp is even.
    if u < 0.0 {
        (-value, chirp)
    } else {
        (value, chirp)
    }
}

/// Precomputed term ratios for the power series (division-free hot
/// loop). Entry n holds the n-th factors of
///
/// ```text
/// C: cₙ/cₙ₋₁ = -t² · (4n-3)/((2n-1)·2n·(4n+1))
/// S: sₙ/sₙ₋₁ = -t² · (4n-1)/(2n·(2n+1)·(4n+3))
/// ```
fn series_ratios() -> &'static [(f64, f64); 60] {
    static RATIOS: OnceLock<[(f64, f64); 60]> = OnceLock::new();
    RATIOS.get_or_init(|| {
        let mut table = [(0.0, 0.0); 60];
        for (n, entry) in table.iter_mut().enumerate().skip(1) {
            let n2 = (2 * n) as f64;
            let n4 = (4 * n) as f64;
            entry.0 = (n4 - 3.0) / ((n2 - 1.0) * n2 * (n4 + 1.0));
            entry.1 = (n4 - 1.0) / (n2 * (n2 + 1.0) * (n4 + 3.0));
        }
        table
    })
}

/// Defining power series, valid (and accurate) for |u| ≤ ~3.
///
/// With t = πu²/2: C(u) = Σ (-1)ⁿ u t²ⁿ / ((2n)! (4n+1)) and
/// S(u) = Σ (-1)ⁿ u t²ⁿ⁺¹ / ((2n+1)! (4n+3)).
fn series_cs(u: f64) -> Complex64 {
    let t = FRAC_PI_2 * u * u;
    let neg_t2 = -(t * t);
    let ratios = series_ratios();

    let mut c_term = u;
    let mut c_sum = c_term;
    let mut s_term = u * t / 3.0;
    let mut s_sum = s_term;

    for &(rc, rs) in ratios.iter().skip(1) {
        c_term *= neg_t2 * rc;
        c_sum += c_term;
        s_term *= neg_t2 * rs;
        s_sum += s_term;
        if c_term.abs() <= 1e-17 * c_sum.abs() && s_term.abs() <= 1e-17 * s_sum.abs() {
            break;
        }
    }
    Complex64::new(c_sum, s_sum)
}

/// Auxiliary functions (f, g) for u ≥ 4.5 by the asymptotic series,
/// truncated at the smallest term.
///
/// With x = πu², f = Σ(-1)^m (4m-1)!!/x^2m / (πu) and
/// g = Σ(-1)^m (4m+1)!!/x^2m / (πu·x); both prefactors reduce to powers
/// of 1/x times u, so a single reciprocal serves the whole evaluation.
fn asymptotic_fg(u: f64) -> (f64, f64) {
    let x = PI * u * u;
    let inv_x = 1.0 / x;
    let inv_x2 = inv_x * inv_x;

    let mut f_sum = 1.0;
    let mut term = 1.0;
    for m in 1..=16 {
        let mf = m as f64;
        let next = term * (4.0 * mf - 3.0) * (4.0 * mf - 1.0) * inv_x2;
        if next >= term.abs() {
            break;
        }
        term = next;
        f_sum += if m % 2 == 0 { term } else { -term };
        if term < 1e-17 * f_sum {
            break;
        }
    }

    let mut g_sum = 1.0;
    term = 1.0;
    for m in 1..=16 {
        let mf = m as f64;
        let next = term * (4.0 * mf - 1.0) * (4.0 * mf + 1.0) * inv_x2;
        if next >= term.abs() {
            break;
        }
        term = next;
        g_sum += if m % 2 == 0 { term } else { -term };
        if term < 1e-17 * g_sum {
            break;
        }
    }

    // 1/(πu) = u/x.
    (f_sum * u * inv_x, g_sum * u * inv_x2)
}

/// Auxiliary functions on the middle band via the convergent integral
///
/// g(u) + i f(u) = e^{iπ/4} ∫₀^∞ e^{-πs²/2 - πus/√2} e^{iπus/√2} ds,
///
/// obtained by rotating the tail integral ∫_u^∞ e^{iπt²/2} dt onto the
/// steepest-descent ray. The integrand decays at least like e^{-πus/√2},
/// so truncation at s = 5 is below 1e-17 for u ≥ 2.5.
fn aux_integral(u: f64) -> (f64, f64) {
    let rule = gauss::rule_24();
    let rate = PI * u / std::f64::consts::SQRT_2;
    let mut total = Complex64::new(0.0, 0.0);
    // Six panels over [0, 5]; at most ~2.5 oscillations per panel for
    // u ≤ 4.5, well inside the rule's resolving power.
    for p in 0..6 {
        let a = 5.0 * p as f64 / 6.0;
        let b = 5.0 * (p + 1) as f64 / 6.0;
        let panel: Complex64 = rule.integrate(a, b, |s| {
            let damp = (-FRAC_PI_2 * s * s - rate * s).exp();
            let (sin_p, cos_p) = (rate * s).sin_cos();
            Complex64::new(damp * cos_p, damp * sin_p)
        });
        total += panel;
    }
    let rotated = Complex64::from_polar(1.0, PI / 4.0) * total;
    (rotated.im, rotated.re)
}

/// Chebyshev interpolants of f and g on [SERIES_LIMIT, ASYMPTOTIC_LIMIT].
struct ChebTable {
    coeff_f: Vec<f64>,
    coeff_g: Vec<f64>,
}

impl ChebTable {
    fn build() -> Self {
        let n = CHEB_ORDER;
        let mid = 0.5 * (SERIES_LIMIT + ASYMPTOTIC_LIMIT);
        let half = 0.5 * (ASYMPTOTIC_LIMIT - SERIES_LIMIT);
        let mut f_vals = vec![0.0; n];
        let mut g_vals = vec![0.0; n];
        for j in 0..n {
            let t = (PI * (j as f64 + 0.5) / n as f64).cos();
            let (f, g) = aux_integral(mid + half * t);
            f_vals[j] = f;
            g_vals[j] = g;
        }
        let coeff = |vals: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|k| {
                    let mut acc = 0.0;
                    for (j, v) in vals.iter().enumerate() {
                        acc += v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos();
                    }
                    2.0 * acc / n as f64
                })
                .collect()
        };
        ChebTable {
            coeff_f: coeff(&f_vals),
            coeff_g: coeff(&g_vals),
        }
    }

    fn eval(&self, u: f64) -> (f64, f64) {
        let mid = 0.5 * (SERIES_LIMIT + ASYMPTOTIC_LIMIT);
        let half = 0.5 * (ASYMPTOTIC_LIMIT - SERIES_LIMIT);
        let t = (u - mid) / half;
        (clenshaw(&self.coeff_f, t), clenshaw(&self.coeff_g, t))
    }
}

fn clenshaw(coeff: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeff.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + 0.5 * coeff[0]
}

fn cheb_table() -> &'static ChebTable {
    static TABLE: OnceLock<ChebTable> = OnceLock::new();
    TABLE.get_or_init(ChebTable::build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let v = fresnel_cs(0.0).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn large_argument_asymptote() {
        // C, S → 1/2 as u → ∞.
        let v = fresnel_cs(50.0).unwrap();
        assert!((v - Complex64::new(0.5, 0.5)).norm() < 1e-2);
    }

    #[test]
    fn known_point() {
        // C(1), S(1) frozen from the defining power series summed to
        // 1e-14 term tolerance (see tests/fresnel_oracle.rs).
        let v = fresnel_cs(1.0).unwrap();
        assert!((v.re - 0.7798934003768228).abs() < 1e-12);
        assert!((v.im - 0.4382591473903548).abs() < 1e-12);
    }

    #[test]
    fn odd_symmetry() {
        for &u in &[0.3, 1.0, 2.49, 2.51, 3.7, 4.49, 4.51, 10.0, 49.0] {
            let plus = fresnel_cs(u).unwrap();
            let minus = fresnel_cs(-u).unwrap();
            assert_eq!(plus, -minus);
        }
    }

    #[test]
    fn branch_seams_are_continuous() {
        for &edge in &[SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
            let below = fresnel_cs(edge - 1e-9).unwrap();
            let above = fresnel_cs(edge + 1e-9).unwrap();
            // Derivative magnitude is ≤ 1, so 1e-9 in the argument can
            // move the value by at most ~1e-9.
            assert!((below - above).norm() < 1e-8);
        }
    }

    #[test]
    fn middle_band_matches_integral_route() {
        // Direct steepest-descent evaluation vs the Chebyshev fit.
        for i in 0..40 {
            let u = 2.5 + 2.0 * (i as f64 + 0.5) / 40.0;
            let (f_fit, g_fit) = cheb_table().eval(u);
            let (f_int, g_int) = aux_integral(u);
            assert!((f_fit - f_int).abs() < 1e-14, "f mismatch at u = {u}");
            assert!((g_fit - g_int).abs() < 1e-14, "g mismatch at u = {u}");
        }
    }

    #[test]
    fn asymptotic_meets_integral_at_switchover() {
        let (f_a, g_a) = asymptotic_fg(ASYMPTOTIC_LIMIT);
        let (f_i, g_i) = aux_integral(ASYMPTOTIC_LIMIT);
        assert!((f_a - f_i).abs() < 1e-13);
        assert!((g_a - g_i).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            fresnel_cs(f64::NAN),
            Err(Error::NonFiniteArgument(_))
        ));
        assert!(fresnel_cs(f64::INFINITY).is_err());
    }
}
