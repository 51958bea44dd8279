//! Vector field assembly, energy density and Poynting flux.
//!
//! A z-independent field splits into an E-polarized part (only E_z
//! nonzero among the z-components) and an H-polarized part (only H_z).
//! Both parts are proportional to the same scalar solution, so the full
//! vector fields follow from the scalar field and its gradient through
//! the curl relations:
//!
//! ```text
//! E = E_e + (i/ωε₀) ∇×H_h,    H = -(i/ωμ₀) ∇×E_e + H_h,
//! ∇×(ψ ẑ) = (∂ψ/∂y) x̂ - (∂ψ/∂x) ŷ.
//! ```
//!
//! Without polarizers both parts propagate the total field Ψ. With
//! ideal orthogonal polarizers on the slits, slit one feeds only the
//! E-polarized component and slit two only the H-polarized one.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::scalar::{slit_wave, GratingGeometry, IncidentProfile, ScalarSample, Slit, WaveParameters};
use crate::{Result, EPSILON_0, MU_0};

/// Energy density of the unobstructed unit-amplitude incident wave,
/// ε₀/2 for a normalized polarization state.
pub const INCIDENT_DENSITY: f64 = 0.5 * EPSILON_0;

/// Polarization of the incident wave: amplitudes of the z-directed
/// electric (alpha) and magnetic (beta) components and their relative
/// phase phi.
///
/// `alpha² + beta² = 1` is enforced at construction; phi is wrapped to
/// (-π, π]. phi = 0 or π gives linear polarization, phi = ±π/2 with
/// alpha = beta gives circular, anything else elliptic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl PolarizationState {
    /// General elliptic state; amplitudes are renormalized.
    pub fn elliptic(alpha: f64, beta: f64, phi: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFiniteArgument("polarization state"));
        }
        if alpha < 0.0 || beta < 0.0 {
            return Err(Error::invalid("polarization", "amplitudes must be ≥ 0"));
        }
        let norm = alpha.hypot(beta);
        if norm <= 0.0 {
            return Err(Error::invalid("polarization", "amplitudes are both zero"));
        }
        Ok(PolarizationState {
            alpha: alpha / norm,
            beta: beta / norm,
            phi: wrap_phase(phi),
        })
    }

    /// Linear polarization at the given angle from the z-axis.
    ///
    /// Negative amplitude components are folded into a π phase so the
    /// stored amplitudes stay non-negative.
    pub fn linear(angle: f64) -> Self {
        let (mut alpha, mut beta) = (angle.cos(), angle.sin());
        let mut phi = 0.0;
        if beta < 0.0 {
            beta = -beta;
            phi += std::f64::consts::PI;
        }
        if alpha < 0.0 {
            alpha = -alpha;
            phi += std::f64::consts::PI;
        }
        PolarizationState {
            alpha,
            beta,
            phi: wrap_phase(phi),
        }
    }

    pub fn circular_right() -> Self {
        PolarizationState {
            alpha: std::f64::consts::FRAC_1_SQRT_2,
            beta: std::f64::consts::FRAC_1_SQRT_2,
            phi: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn circular_left() -> Self {
        PolarizationState {
            alpha: std::f64::consts::FRAC_1_SQRT_2,
            beta: std::f64::consts::FRAC_1_SQRT_2,
            phi: -std::f64::consts::FRAC_PI_2,
        }
    }

    /// The eight reference states used throughout the test scenarios:
    /// four linear orientations, both circular handednesses and an
    /// elliptic pair with a 2:1 intensity split between the components.
    pub fn standard_set() -> Vec<(&'static str, PolarizationState)> {
        let e_major = (2.0f64 / 3.0).sqrt();
        let e_minor = (1.0f64 / 3.0).sqrt();
        vec![
            ("linear-0", PolarizationState::linear(0.0)),
            ("linear-45", PolarizationState::linear(45f64.to_radians())),
            ("linear-90", PolarizationState::linear(90f64.to_radians())),
            ("linear-135", PolarizationState::linear(135f64.to_radians())),
            ("circular-r", PolarizationState::circular_right()),
            ("circular-l", PolarizationState::circular_left()),
            (
                "elliptic-r",
                PolarizationState::elliptic(e_major, e_minor, std::f64::consts::FRAC_PI_2)
                    .expect("static state"),
            ),
            (
                "elliptic-l",
                PolarizationState::elliptic(e_major, e_minor, -std::f64::consts::FRAC_PI_2)
                    .expect("static state"),
            ),
        ]
    }

    /// Complex amplitude β e^{iφ} of the H-polarized component.
    ///
    /// φ = π is mapped to exactly -β so states canonicalized from
    /// negative linear amplitudes stay exactly linear.
    pub(crate) fn beta_phase(&self) -> Complex64 {
        if self.phi == std::f64::consts::PI {
            return Complex64::new(-self.beta, 0.0);
        }
        self.beta * Complex64::from_polar(1.0, self.phi)
    }
}

fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * std::f64::consts::PI);
    if p > std::f64::consts::PI {
        p -= 2.0 * std::f64::consts::PI;
    }
    p
}

/// Polarizer arrangement on the slits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarizers {
    /// Open slits: both field components diffract through both slits.
    None,
    /// Ideal orthogonal polarizers: slit one passes only the
    /// E-polarized component, slit two only the H-polarized one.
    Orthogonal,
}

/// Complex vector E and H fields at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub e: [Complex64; 3],
    pub h: [Complex64; 3],
    pub position: [f64; 3],
}

/// Assemble the vector fields at (x, y) for the given polarization and
/// polarizer configuration. The fields are independent of z.
pub fn assemble_fields(
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
    polarization: &PolarizationState,
    polarizers: Polarizers,
) -> Result<FieldSample> {
    let (one, two) = crate::scalar::slit_pair(x, y, wave, grating, profile)?;
    let (e_part, h_part) = match polarizers {
        Polarizers::None => {
            let total = one + two;
            (total, total)
        }
        // Slit one feeds the E-polarized component, slit two the
        // H-polarized one.
        Polarizers::Orthogonal => (one, two),
    };
    Ok(fields_from_scalar(x, y, wave, polarization, &e_part, &h_part))
}

/// Build E and H from the scalar samples feeding the E- and H-polarized
/// components.
pub(crate) fn fields_from_scalar(
    x: f64,
    y: f64,
    wave: &WaveParameters,
    polarization: &PolarizationState,
    e_part: &ScalarSample,
    h_part: &ScalarSample,
) -> FieldSample {
    let k = wave.wavenumber;
    let omega = wave.angular_frequency;
    let alpha = polarization.alpha;
    let beta_phase = polarization.beta_phase();

    // E = (iβe^{iφ}/k) ∂ψ_h/∂y x̂ - (iβe^{iφ}/k) ∂ψ_h/∂x ŷ + αψ_e ẑ
    let i_be_over_k = Complex64::new(0.0, 1.0) * beta_phase / k;
    let e = [
        i_be_over_k * h_part.grad_y,
        -i_be_over_k * h_part.grad_x,
        alpha * e_part.value,
    ];
    // H = -(iα/ωμ₀) ∂ψ_e/∂y x̂ + (iα/ωμ₀) ∂ψ_e/∂x ŷ + (kβe^{iφ}/ωμ₀) ψ_h ẑ
    let i_a_over_wm = Complex64::new(0.0, alpha / (omega * MU_0));
    let h = [
        -i_a_over_wm * e_part.grad_y,
        i_a_over_wm * e_part.grad_x,
        (k / (omega * MU_0)) * beta_phase * h_part.value,
    ];
    FieldSample {
        e,
        h,
        position: [x, y, 0.0],
    }
}

/// Field of the unobstructed incident plane wave at height y, used for
/// consistency checks against the free-space solution.
pub fn free_field(y: f64, wave: &WaveParameters, polarization: &PolarizationState) -> FieldSample {
    let carrier = Complex64::from_polar(1.0, wave.wavenumber * y);
    let sample = ScalarSample {
        value: carrier,
        grad_x: Complex64::new(0.0, 0.0),
        grad_y: Complex64::new(0.0, wave.wavenumber) * carrier,
    };
    fields_from_scalar(0.0, y, wave, polarization, &sample, &sample)
}

/// Time-averaged electromagnetic energy density
/// U = ¼ (ε₀ E·E* + μ₀ H·H*).
pub fn eme_density(field: &FieldSample) -> f64 {
    let e2: f64 = field.e.iter().map(|c| c.norm_sqr()).sum();
    let h2: f64 = field.h.iter().map(|c| c.norm_sqr()).sum();
    0.25 * (EPSILON_0 * e2 + MU_0 * h2)
}

/// Time-averaged Poynting vector S = ½ Re(E × H*).
pub fn poynting(field: &FieldSample) -> [f64; 3] {
    let e = &field.e;
    let hc = [field.h[0].conj(), field.h[1].conj(), field.h[2].conj()];
    [
        0.5 * (e[1] * hc[2] - e[2] * hc[1]).re,
        0.5 * (e[2] * hc[0] - e[0] * hc[2]).re,
        0.5 * (e[0] * hc[1] - e[1] * hc[0]).re,
    ]
}

/// Energy density rebuilt from a scalar sample alone:
/// (|∂ψ/∂x|² + |∂ψ/∂y|² + k²|ψ|²) / 4k² (times ε₀, which is one).
///
/// For open slits with Ψ this reproduces `eme_density` of the assembled
/// fields exactly; with orthogonal polarizers the density is the
/// α²/β²-weighted sum over the per-slit samples. Kept as an independent
/// algebraic cross-check of the field assembly.
pub fn scalar_energy_density(sample: &ScalarSample, wave: &WaveParameters) -> f64 {
    let k2 = wave.wavenumber * wave.wavenumber;
    EPSILON_0
        * (sample.grad_x.norm_sqr() + sample.grad_y.norm_sqr() + k2 * sample.value.norm_sqr())
        / (4.0 * k2)
}

/// Energy density contributed by a single slit with the other blocked,
/// normalized by the incident density.
pub fn slit_density(
    slit: Slit,
    x: f64,
    y: f64,
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
) -> Result<f64> {
    let sample = slit_wave(slit, x, y, wave, grating, profile)?;
    Ok(scalar_energy_density(&sample, wave) / INCIDENT_DENSITY)
}

/// Normalized energy-density profile U(x, L)/U₀ sampled on a transverse
/// grid at the screen plane.
pub fn screen_profile(
    screen_distance: f64,
    xgrid: &[f64],
    wave: &WaveParameters,
    grating: &GratingGeometry,
    profile: &IncidentProfile,
    polarization: &PolarizationState,
    polarizers: Polarizers,
) -> Result<Vec<(f64, f64)>> {
    if xgrid.is_empty() {
        return Err(Error::EmptyInput("screen grid"));
    }
    if xgrid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("screen grid", "must be strictly increasing"));
    }
    xgrid
        .par_iter()
        .map(|&x| {
            let field = assemble_fields(x, screen_distance, wave, grating, profile, polarization, polarizers)?;
            Ok((x, eme_density(&field) / INCIDENT_DENSITY))
        })
        .collect()
}
