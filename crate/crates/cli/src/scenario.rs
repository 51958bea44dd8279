//! Scenario configuration: parsing, validation and builtins.
//!
//! Config files are flat `key = value` text with `#` comments. Keys:
//!
//! ```text
//! name                = fig5           # output directory name
//! wavelength_nm       = 532.5
//! slit_separation_mm  = 0.25
//! slit_width_mm       = 0.1
//! screen_distance_mm  = 558
//! x_min_mm            = -4             # screen grid
//! x_max_mm            = 4
//! n_points            = 2001
//! profile             = plane          # or gaussian:<waist_mm>
//! polarization        = circular:r     # linear:<deg> | circular:<r|l>
//!                                      # | elliptic:<alpha>,<beta>,<phi_rad>
//! polarizers          = none           # or orthogonal
//! trajectories        = 30             # total flow lines (0 = none)
//! seed                = 42
//! ```

use slitflow::{
    GratingGeometry, IncidentProfile, PolarizationState, Polarizers, WaveParameters,
};

use crate::error::CliError;

/// A fully-specified simulation scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub wavelength: f64,
    pub slit_separation: f64,
    pub slit_width: f64,
    pub screen_distance: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub profile: IncidentProfile,
    pub polarization_label: String,
    pub polarization: PolarizationState,
    pub polarizers: Polarizers,
    /// Total flow lines to trace (split evenly between the slits).
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for Scenario {
    /// The figure-reproduction constants: λ = 532.5 nm, d = 0.25 mm,
    /// δ = 0.1 mm, L = 558 mm, grid x ∈ [-4, 4] mm with 2001 points.
    fn default() -> Self {
        Scenario {
            name: "scenario".into(),
            wavelength: 532.5e-9,
            slit_separation: 0.25e-3,
            slit_width: 0.1e-3,
            screen_distance: 0.558,
            x_min: -4e-3,
            x_max: 4e-3,
            n_points: 2001,
            profile: IncidentProfile::Plane,
            polarization_label: "circular:r".into(),
            polarization: PolarizationState::circular_right(),
            polarizers: Polarizers::None,
            trajectories: 0,
            seed: 42,
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let mut scenario = Scenario::default();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::validation(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    line_no + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |what: &str, v: &str| -> Result<f64, CliError> {
                v.parse::<f64>()
                    .map_err(|_| CliError::validation(format!("{what}: `{v}` is not a number")))
            };
            match key {
                "name" => scenario.name = value.to_string(),
                "wavelength_nm" => scenario.wavelength = parse_f64(key, value)? * 1e-9,
                "slit_separation_mm" => scenario.slit_separation = parse_f64(key, value)? * 1e-3,
                "slit_width_mm" => scenario.slit_width = parse_f64(key, value)? * 1e-3,
                "screen_distance_mm" => scenario.screen_distance = parse_f64(key, value)? * 1e-3,
                "x_min_mm" => scenario.x_min = parse_f64(key, value)? * 1e-3,
                "x_max_mm" => scenario.x_max = parse_f64(key, value)? * 1e-3,
                "n_points" => {
                    scenario.n_points = value.parse().map_err(|_| {
                        CliError::validation(format!("n_points: `{value}` is not an integer"))
                    })?
                }
                "profile" => scenario.profile = parse_profile(value)?,
                "polarization" => {
                    scenario.polarization = parse_polarization(value)?;
                    scenario.polarization_label = value.to_string();
                }
                "polarizers" => {
                    scenario.polarizers = match value {
                        "none" => Polarizers::None,
                        "orthogonal" => Polarizers::Orthogonal,
                        other => {
                            return Err(CliError::validation(format!(
                                "polarizers: `{other}` is not `none` or `orthogonal`"
                            )))
                        }
                    }
                }
                "trajectories" => {
                    scenario.trajectories = value.parse().map_err(|_| {
                        CliError::validation(format!("trajectories: `{value}` is not an integer"))
                    })?
                }
                "seed" => {
                    scenario.seed = value.parse().map_err(|_| {
                        CliError::validation(format!("seed: `{value}` is not an unsigned integer"))
                    })?
                }
                other => {
                    return Err(CliError::validation(format!("unknown key `{other}`")));
                }
            }
        }
        scenario.validate()?;
        Ok(scenario)
    }

    /// Field-level validation; returns the core configuration objects.
    pub fn validate(&self) -> Result<(WaveParameters, GratingGeometry), CliError> {
        let wave = WaveParameters::new(self.wavelength, self.screen_distance)
            .map_err(|e| CliError::validation(e.to_string()))?;
        let grating = GratingGeometry::new(self.slit_separation, self.slit_width)
            .map_err(|e| CliError::validation(e.to_string()))?;
        self.profile
            .validate()
            .map_err(|e| CliError::validation(e.to_string()))?;
        if self.n_points < 2 {
            return Err(CliError::validation("n_points must be ≥ 2"));
        }
        if self.x_min >= self.x_max || self.x_min.is_nan() || self.x_max.is_nan() {
            return Err(CliError::validation("x_min must be < x_max"));
        }
        if self.x_min.abs() > slitflow::scalar::X_LIMIT || self.x_max.abs() > slitflow::scalar::X_LIMIT {
            return Err(CliError::validation(format!(
                "screen grid exceeds the evaluation domain |x| ≤ {} m",
                slitflow::scalar::X_LIMIT
            )));
        }
        Ok((wave, grating))
    }

    pub fn xgrid(&self) -> Vec<f64> {
        (0..self.n_points)
            .map(|i| {
                self.x_min + (self.x_max - self.x_min) * i as f64 / (self.n_points - 1) as f64
            })
            .collect()
    }
}

fn parse_profile(value: &str) -> Result<IncidentProfile, CliError> {
    if value == "plane" {
        return Ok(IncidentProfile::Plane);
    }
    if let Some(waist) = value.strip_prefix("gaussian:") {
        let w: f64 = waist
            .parse()
            .map_err(|_| CliError::validation(format!("profile waist `{waist}` is not a number")))?;
        return Ok(IncidentProfile::Gaussian { waist: w * 1e-3 });
    }
    Err(CliError::validation(format!(
        "profile: `{value}` is not `plane` or `gaussian:<waist_mm>`"
    )))
}

fn parse_polarization(value: &str) -> Result<PolarizationState, CliError> {
    if let Some(angle) = value.strip_prefix("linear:") {
        let degrees: f64 = angle
            .parse()
            .map_err(|_| CliError::validation(format!("linear angle `{angle}` is not a number")))?;
        return Ok(PolarizationState::linear(degrees.to_radians()));
    }
    if let Some(hand) = value.strip_prefix("circular:") {
        return match hand {
            "r" => Ok(PolarizationState::circular_right()),
            "l" => Ok(PolarizationState::circular_left()),
            other => Err(CliError::validation(format!(
                "circular handedness `{other}` is not `r` or `l`"
            ))),
        };
    }
    if let Some(rest) = value.strip_prefix("elliptic:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::validation(
                "elliptic polarization needs `alpha,beta,phi_rad`",
            ));
        }
        let mut nums = [0.0f64; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|_| {
                CliError::validation(format!("elliptic component `{part}` is not a number"))
            })?;
        }
        return PolarizationState::elliptic(nums[0], nums[1], nums[2])
            .map_err(|e| CliError::validation(e.to_string()));
    }
    Err(CliError::validation(format!(
        "polarization `{value}` is not linear:<deg>, circular:<r|l> or elliptic:<a>,<b>,<phi>"
    )))
}

/// What a command-line target resolves to: one scenario or a
/// polarization sweep.
#[derive(Debug, Clone)]
pub enum RunSpec {
    Single(Scenario),
    /// One profile per polarization state, plus a pairwise-difference
    /// summary.
    Sweep {
        base: Scenario,
        states: Vec<(String, PolarizationState)>,
    },
}

/// Builtin scenarios reproducing the reference figures.
pub fn builtin(name: &str) -> Option<RunSpec> {
    match name {
        // Density profile and 30 flow lines, circular light, open slits.
        "fig5" => Some(RunSpec::Single(Scenario {
            name: "fig5".into(),
            trajectories: 30,
            ..Scenario::default()
        })),
        // Same with orthogonal polarizers on the slits.
        "fig6" => Some(RunSpec::Single(Scenario {
            name: "fig6".into(),
            trajectories: 30,
            polarizers: Polarizers::Orthogonal,
            ..Scenario::default()
        })),
        // Profiles for the eight reference polarization states.
        "fig3-sweep" => Some(RunSpec::Sweep {
            base: Scenario {
                name: "fig3-sweep".into(),
                ..Scenario::default()
            },
            states: PolarizationState::standard_set()
                .into_iter()
                .map(|(label, state)| (label.to_string(), state))
                .collect(),
        }),
        _ => None,
    }
}

pub fn builtin_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("fig5", "circular polarization, open slits, profile + 30 flow lines"),
        ("fig6", "circular polarization, orthogonal polarizers, profile + 30 flow lines"),
        ("fig3-sweep", "density profiles for eight polarization states"),
    ]
}
