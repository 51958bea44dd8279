//! Error type shared by all simulation stages.

use thiserror::Error;

/// Errors produced by field evaluation, integration and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numerical argument was NaN or infinite.
    #[error("non-finite argument: {0}")]
    NonFiniteArgument(&'static str),

    /// Field evaluation requested at or before the grating plane (y ≤ 0).
    #[error("evaluation in or before grating plane (y = {y:.6e} m)")]
    BeforeGrating { y: f64 },

    /// Evaluation point outside the paraxial validity region.
    #[error("point (x = {x:.6e} m, y = {y:.6e} m) outside the evaluation domain")]
    OutsideDomain { x: f64, y: f64 },

    /// Energy density below the stagnation threshold; the flow-line
    /// velocity is ill-defined near a node of the field.
    #[error("stagnation region at (x = {x:.6e} m, y = {y:.6e} m): density {density:.3e}")]
    Stagnation { x: f64, y: f64, density: f64 },

    /// A trajectory exceeded the step budget before reaching the screen.
    #[error("trajectory exceeded {limit} integration steps")]
    MaxSteps { limit: usize },

    /// Endpoint statistics requested over trajectories that did not all
    /// reach the screen.
    #[error("trajectory terminated by {reason} instead of reaching the screen")]
    TrajectoryIncomplete { reason: &'static str },

    /// A profile or sample list was empty or degenerate.
    #[error("empty or degenerate input: {0}")]
    EmptyInput(&'static str),

    /// Profile grid too coarse for fringe detection.
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(&'static str),

    /// A constructor argument violated its invariant.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
