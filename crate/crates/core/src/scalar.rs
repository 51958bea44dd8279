//! Scalar wave propagation behind the double-slit grating.
//!
//! The grating sits in the plane y = 0 with slits parallel to the z-axis,
//! so the scalar field depends on (x, y) only. Behind the grating the
//! paraxial solution for each slit is the Fresnel integral of the
//! incident wave over the slit opening:
//!
//! ```text
//! ψᵢ(x, y) = √(k/2πy) e^{-iπ/4} e^{iky} ∫_slit Ψ₀(x', 0⁻) e^{ik(x-x')²/2y} dx'
//! ```
//!
//! For a plane incident wave the integral reduces to a difference of
//! Fresnel integrals and both the value and the transverse gradient are
//! evaluated in closed form. A Gaussian incident envelope keeps the
//! integral form and is evaluated by oscillation-aware Gauss–Legendre
//! panels.
//!
//! Gradients are taken on the carrier-factored envelope χ = e^{-iky} ψ,
//! whose only y-dependence in the plane-wave case is through the
//! Fresnel arguments u±(y): both ∂χ/∂x and ∂χ/∂y then close over the
//! endpoint chirp values e^{iπu²/2}. The quadrature (Gaussian-envelope)
//! path keeps central finite differences with step λ/100 on χ, which
//! only sees the slowly varying envelope because the e^{iky} carrier is
//! differentiated analytically.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::Error;
use crate::fresnel::fresnel_cs_with_chirp;
use crate::gauss;
use crate::{Result, C_LIGHT};

/// Largest |x| accepted by field evaluation (paraxial validity).
pub const X_LIMIT: f64 = 0.025;
/// Largest y accepted by field evaluation.
pub const Y_LIMIT: f64 = 2.0;

/// Optical configuration of the incident wave and the screen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters {
    /// Vacuum wavelength λ (m).
    pub wavelength: f64,
    /// Wavenumber k = 2π/λ (1/m).
    pub wavenumber: f64,
    /// Angular frequency ω = c·k (1/s in normalized units with c = 1).
    pub angular_frequency: f64,
    /// Default screen distance L (m).
    pub screen_distance: f64,
}

impl WaveParameters {
    pub fn new(wavelength: f64, screen_distance: f64) -> Result<Self> {
        if wavelength <= 0.0 || !wavelength.is_finite() {
            return Err(Error::invalid("wavelength", "must be finite and > 0"));
        }
        if screen_distance <= 0.0 || screen_distance.is_nan() || screen_distance > Y_LIMIT {
            return Err(Error::invalid(
                "screen_distance",
                format!("must lie in (0, {Y_LIMIT}] m"),
            ));
        }
        let wavenumber = 2.0 * PI / wavelength;
        Ok(WaveParameters {
            wavelength,
            wavenumber,
            angular_frequency: C_LIGHT * wavenumber,
            screen_distance,
        })
    }
}

/// One of the two slit openings. Slit one is centred at -d/2, slit two
/// at +d/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slit {
    One,
    Two,
}

impl Slit {
    pub const ALL: [Slit; 2] = [Slit::One, Slit::Two];

    pub fn index(self) -> usize {
        match self {
            Slit::One => 0,
            Slit::Two => 1,
        }
    }
}

/// Two-slit grating geometry on the x-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingGeometry {
    /// Centre-to-centre slit separation d (m).
    pub separation: f64,
    /// Slit width δ (m).
    pub slit_width: f64,
}

impl GratingGeometry {
    pub fn new(separation: f64, slit_width: f64) -> Result<Self> {
        if !separation.is_finite() || !slit_width.is_finite() {
            return Err(Error::invalid("grating", "non-finite dimensions"));
        }
        if slit_width <= 0.0 || slit_width >= separation || slit_width.is_nan() {
            return Err(Error::invalid(
                "grating",
                format!("requires 0 < slit_width < separation, got δ = {slit_width}, d = {separation}"),
            ));
        }
        Ok(GratingGeometry {
            separation,
            slit_width,
        })
    }

    pub fn slit_count(&self) -> usize {
        2
    }

    pub fn slit_center(&self, slit: Slit) -> f64 {
        match slit {
            Slit::One => -0.5 * self.separation,
            Slit::Two => 0.5 * self.separation,
        }
    }

    /// Interval [c - δ/2, c + δ/2] occupied by a slit.
    pub fn slit_interval(&self, slit: Slit) -> (f64, f64) {
        let c = self.slit_center(slit);
        (c - 0.5 * self.slit_width, c + 0.5 * self.slit_width)
    }
}

/// Transverse shape of the incident beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IncidentProfile {
    /// Unit-amplitude plane wave.
    Plane,
    /// Gaussian amplitude envelope e^{-x²/w²} (intensity e^{-2x²/w²}).
    Gaussian { waist: f64 },
}

impl IncidentProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            IncidentProfile::Plane => Ok(()),
            IncidentProfile::Gaussian { waist } => {
                if *waist > 0.0 && waist.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("waist", "must be finite and > 0"))
                }
            }
        }
    }

    /// Real amplitude envelope at transverse position x.
    pub fn envelope(&self, x: f64) -> f64 {
        match self {
            IncidentProfile::Plane => 1.0,
            IncidentProfile::Gaussian { waist } => (-x * x / (waist * waist)).exp(),
        }
    }
}

/// Scalar field value and its gradient at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSample {
    pub value: Complex64,
    pub grad_x: Complex64,
    pub grad_y: Complex64,
}

impl std::ops::Add for ScalarSample {
    type Output = ScalarSample;

    fn add(self, rhs: ScalarSample) -> ScalarSample {
        ScalarSample {
            value: self.value + rhs.value,
            grad_x: self.grad_x + rhs.grad_x,
            grad_y: self.grad_y + rhs.grad_y,
        }
    }
}

/// Reject evaluation points outside the paraxial validity region.
pub(crate) fn check_domain(x: f64, y: f64) -> Result<()> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFiniteArgument("evaluation point"));
    }
    if y <= 0.0 {
        return Err(Error::BeforeGrating { y });
    }
    if y > Y_LIMIT || x.abs() > X_LIMIT {
        return Err(Error::OutsideDomain { x, y });
    }
    Ok(())
}

/// Incident scalar wave Ψ₀ at (x, y): plane carrier times the profile
/// envelope.
pub fn incident_wave(x: f64, y: f64, wave: &WaveParameters, profile: &IncidentProfile) -> Complex64 {
    Complex64::from_polar(profile.envelope(x), wave.wavenumber * y)
}

/// Unit-modulus phase factor e^{iθ}. Carrier phases k·y reach ~1e7 rad;
/// the quarter-turn conversion costs one rounding of the same order as
/// the error already present in the k·y product.
#[inline]
pub(crate) fn unit_phase(theta: f64) -> Complex64 {
    let (s, c) = crate::trig::sin_cos_quarters(theta * (2.0 / PI));
    Complex64::new(c, s)
}

/// Diffracted scalar field of a single slit.
pub fn slit_wave(
    slit: Slit,
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
) -> Result<ScalarSample> {
    check_domain(x, y)?;
    let carrier = unit_phase(wave.wavenumber * y);
    slit_sample(slit, x, y, wave, grating, profile, carrier)
}

/// Both slit fields with the carrier phase evaluated once; this is the
/// hot path of the flow-line integrator.
pub(crate) fn slit_pair(
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
) -> Result<(ScalarSample, ScalarSample)> {
    check_domain(x, y)?;
    let carrier = unit_phase(wave.wavenumber * y);
    Ok((
        slit_sample(Slit::One, x, y, wave, grating, profile, carrier)?,
        slit_sample(Slit::Two, x, y, wave, grating, profile, carrier)?,
    ))
}

fn slit_sample(
    slit: Slit,
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
    carrier: Complex64,
) -> Result<ScalarSample> {
    let k = wave.wavenumber;
    let (value_env, grad_x_env, grad_y_env) = match profile {
        IncidentProfile::Plane => plane_envelope(slit, x, y, k, grating)?,
        IncidentProfile::Gaussian { .. } => {
            gaussian_envelope_gradients(slit, x, y, k, grating, profile, wave.wavelength)?
        }
    };
    let ik = Complex64::new(0.0, k);
    Ok(ScalarSample {
        value: carrier * value_env,
        grad_x: carrier * grad_x_env,
        grad_y: carrier * (ik * value_env + grad_y_env),
    })
}

/// Total diffracted field: sum of the two slit contributions.
pub fn total_wave(
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
) -> Result<ScalarSample> {
    let (one, two) = slit_pair(x, y, wave, grating, profile)?;
    Ok(one + two)
}

/// Closed-form plane-wave envelope and both gradients.
///
/// χ = (e^{-iπ/4}/√2) [F(u₊) - F(u₋)] with F the Fresnel integral and
/// u± = √(k/πy) (x - c ± δ/2). The only coordinate dependence is
/// through u±, so with the chirp dF/du = e^{iπu²/2}:
///
/// ```text
/// ∂χ/∂x = prefactor · √(k/πy) (chirp₊ - chirp₋)
/// ∂χ/∂y = prefactor · (-1/2y) (chirp₊ u₊ - chirp₋ u₋)
/// ```
fn plane_envelope(
    slit: Slit,
    x: f64,
    y: f64,
    k: f64,
    grating: &GratingGeometry,
) -> Result<(Complex64, Complex64, Complex64)> {
    let c = grating.slit_center(slit);
    let scale = (k / (PI * y)).sqrt();
    let u_plus = scale * (x - c + 0.5 * grating.slit_width);
    let u_minus = scale * (x - c - 0.5 * grating.slit_width);

    let (f_plus, chirp_plus) = fresnel_cs_with_chirp(u_plus);
    let (f_minus, chirp_minus) = fresnel_cs_with_chirp(u_minus);
    let prefactor = Complex64::new(0.5, -0.5); // e^{-iπ/4}/√2
    let value = prefactor * (f_plus - f_minus);

    let grad_x = prefactor * scale * (chirp_plus - chirp_minus);
    let grad_y = prefactor * (-0.5 / y) * (chirp_plus * u_plus - chirp_minus * u_minus);

    Ok((value, grad_x, grad_y))
}

/// Quadrature envelope for a shaped incident beam, with both gradients
/// by central finite difference (the endpoint formulas no longer close
/// when the envelope varies across the slit). The y-step is clamped so
/// the stencil stays behind the grating close to it.
fn gaussian_envelope_gradients(
    slit: Slit,
    x: f64,
    y: f64,
    k: f64,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
    wavelength: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let h = wavelength / 100.0;
    let hy = h.min(0.5 * y);
    let value = gaussian_envelope_value(slit, x, y, k, grating, profile);
    let x_plus = gaussian_envelope_value(slit, x + h, y, k, grating, profile);
    let x_minus = gaussian_envelope_value(slit, x - h, y, k, grating, profile);
    let y_plus = gaussian_envelope_value(slit, x, y + hy, k, grating, profile);
    let y_minus = gaussian_envelope_value(slit, x, y - hy, k, grating, profile);
    Ok((
        value,
        (x_plus - x_minus) / (2.0 * h),
        (y_plus - y_minus) / (2.0 * hy),
    ))
}

fn gaussian_envelope_value(
    slit: Slit,
    x: f64,
    y: f64,
    k: f64,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
) -> Complex64 {
    let (a, b) = grating.slit_interval(slit);
    // Local chirp rate bounds the oscillation count over the slit.
    let max_rate = k * (x - a).abs().max((x - b).abs()) / y;
    let cycles = max_rate * (b - a) / (2.0 * PI);
    let panels = (3.0 * cycles).ceil() as usize + 4;
    let rule = gauss::rule_20();

    let mut integral = Complex64::new(0.0, 0.0);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let hi = lo + width;
        integral += rule.integrate(lo, hi, |xp| {
            let phase = k * (x - xp) * (x - xp) / (2.0 * y);
            Complex64::from_polar(profile.envelope(xp), phase)
        });
    }
    Complex64::from_polar((k / (2.0 * PI * y)).sqrt(), -FRAC_PI_4) * integral
}
