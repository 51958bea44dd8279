//! Vector electromagnetic simulation of a double-slit grating.
//!
//! The crate computes the complex scalar field diffracted by a two-slit
//! grating in the paraxial (Fresnel) regime, assembles the full vector
//! electric and magnetic fields for an arbitrarily polarized incident
//! wave with or without orthogonal polarizers on the slits, and derives
//! the observables measured in the lab: electromagnetic energy density,
//! Poynting flux, energy flow lines and fringe geometry.
//!
//! Modules mirror the processing pipeline:
//!
//! * [`fresnel`] — Fresnel cosine/sine integral kernel.
//! * [`scalar`] — incident wave and per-slit/total diffracted scalar field.
//! * [`field`] — vector E/H assembly, energy density, Poynting vector,
//!   screen profiles.
//! * [`flow`] — energy flow-line integration and endpoint statistics.
//! * [`fringe`] — analytic fringe predictor and empirical profile analysis.
//!
//! All quantities use a normalized unit system with `ε₀ = μ₀ = c = 1`;
//! every reported observable is a ratio (density relative to the incident
//! wave, flux relative to `c·U`), so the physical constants cancel.
//! Lengths are in meters.

pub mod error;
pub mod field;
pub mod flow;
pub mod fresnel;
pub mod fringe;
pub mod rng;
pub mod scalar;

mod gauss;
mod trig;

pub use error::Error;
pub use field::{
    assemble_fields, eme_density, free_field, poynting, scalar_energy_density, screen_profile,
    slit_density, FieldSample, PolarizationState, Polarizers, INCIDENT_DENSITY,
};
pub use flow::{
    endpoint_histogram, flow_velocity, integrate_bundle, integrate_trajectory, trace_endpoints,
    Histogram, IntegrationControls, LaunchDistribution, LaunchPlan, Termination, Trajectory,
    TrajectoryPoint,
};
pub use fresnel::fresnel_cs;
pub use fringe::{
    analyze_profile, coincidence_condition, fringe_centers, momentum_amplitude, spectral_ratio,
    FringeReport,
};
pub use scalar::{
    incident_wave, slit_wave, total_wave, GratingGeometry, IncidentProfile, ScalarSample, Slit,
    WaveParameters,
};

/// Vacuum permittivity in the normalized unit system.
pub const EPSILON_0: f64 = 1.0;
/// Vacuum permeability in the normalized unit system.
pub const MU_0: f64 = 1.0;
/// Vacuum light speed in the normalized unit system.
pub const C_LIGHT: f64 = 1.0;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
