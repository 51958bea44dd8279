//! Scenario execution and deterministic file emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use sha2::{Digest, Sha256};
use slitflow::{
    analyze_profile, fringe, fringe_centers, integrate_bundle, screen_profile, FringeReport,
    IntegrationControls, LaunchDistribution, LaunchPlan, PolarizationState, Trajectory,
};

use crate::error::CliError;
use crate::scenario::Scenario;

/// Record of one scenario run: the files written and their digests.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub scenario_name: String,
    pub output_dir: PathBuf,
    pub files: Vec<FileDigest>,
    pub duration_ms: u128,
}

#[derive(Debug, Clone)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Launch height above the grating, in wavelengths.
const LAUNCH_HEIGHT_WAVELENGTHS: f64 = 10.0;

/// Run a single scenario, writing all outputs into `out_dir`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<RunManifest, CliError> {
    let started = Instant::now();
    let (wave, grating) = scenario.validate()?;
    fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();

    // Density profile on the screen grid.
    let grid = scenario.xgrid();
    let profile = screen_profile(
        scenario.screen_distance,
        &grid,
        &wave,
        &grating,
        &scenario.profile,
        &scenario.polarization,
        scenario.polarizers,
    )?;
    files.push(write_file(out_dir, "profile.csv", &profile_csv(&profile))?);

    // Flow lines, when requested.
    if scenario.trajectories > 0 {
        let plan = LaunchPlan {
            count_per_slit: scenario.trajectories.div_ceil(2),
            y0: LAUNCH_HEIGHT_WAVELENGTHS * scenario.wavelength,
            distribution: LaunchDistribution::Uniform,
        };
        let launches = plan.launch_points(&grating, &scenario.profile, scenario.seed)?;
        let trajectories = integrate_bundle(
            &launches,
            &wave,
            &grating,
            &scenario.profile,
            &scenario.polarization,
            scenario.polarizers,
            scenario.screen_distance,
            &IntegrationControls::default(),
        )?;
        files.push(write_file(
            out_dir,
            "trajectories.csv",
            &trajectories_csv(&trajectories),
        )?);
    }

    // Fringe analysis: analytic predictor plus the empirical report.
    // Grids too coarse for extrema detection still get the analytic
    // half.
    let analytic = fringe_centers(&grating, &wave, 3).map_err(CliError::Numerical)?;
    let empirical = analyze_profile(&profile).ok();
    let fringe_frequency = grating.separation / (wave.wavelength * scenario.screen_distance);
    let spectral = fringe::spectral_ratio(&profile, fringe_frequency, true).ok();
    let report = fringe_report_json(&analytic, empirical.as_ref(), spectral);
    files.push(write_file(
        out_dir,
        "fringe_report.json",
        report.as_bytes(),
    )?);

    // Plot scripts for the emitted data.
    files.push(write_file(out_dir, "profile.gp", profile_plot_script().as_bytes())?);
    if scenario.trajectories > 0 {
        files.push(write_file(
            out_dir,
            "trajectories.gp",
            trajectories_plot_script().as_bytes(),
        )?);
    }

    let manifest = RunManifest {
        scenario_name: scenario.name.clone(),
        output_dir: out_dir.to_path_buf(),
        files,
        duration_ms: started.elapsed().as_millis(),
    };
    let manifest_json = manifest_json(scenario, &manifest);
    fs::write(out_dir.join("manifest.json"), manifest_json)?;
    Ok(manifest)
}

/// Run one profile per polarization state and summarize their pairwise
/// agreement.
pub fn run_sweep(
    base: &Scenario,
    states: &[(String, PolarizationState)],
    out_dir: &Path,
) -> Result<RunManifest, CliError> {
    let started = Instant::now();
    let (wave, grating) = base.validate()?;
    fs::create_dir_all(out_dir)?;
    let grid = base.xgrid();
    let mut files = Vec::new();
    let mut normalized: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::new();

    for (label, state) in states {
        let profile = screen_profile(
            base.screen_distance,
            &grid,
            &wave,
            &grating,
            &base.profile,
            state,
            base.polarizers,
        )?;
        files.push(write_file(
            out_dir,
            &format!("profile_{label}.csv"),
            &profile_csv(&profile),
        )?);
        let max = profile.iter().map(|&(_, u)| u).fold(0.0, f64::max);
        normalized.push(profile.iter().map(|&(_, u)| u / max).collect());
        labels.push(label.clone());
    }

    // Pairwise maximum absolute difference of the normalized profiles.
    let mut worst = 0.0f64;
    let mut pairs = Vec::new();
    for i in 0..normalized.len() {
        for j in i + 1..normalized.len() {
            let diff = normalized[i]
                .iter()
                .zip(&normalized[j])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
            pairs.push(json!({
                "states": [labels[i], labels[j]],
                "max_abs_difference": diff,
            }));
        }
    }
    let summary = serde_json::to_string_pretty(&json!({
        "states": labels,
        "worst_pairwise_difference": worst,
        "pairs": pairs,
    }))
    .expect("json");
    files.push(write_file(out_dir, "sweep_summary.json", summary.as_bytes())?);
    files.push(write_file(out_dir, "profile.gp", profile_plot_script().as_bytes())?);

    let manifest = RunManifest {
        scenario_name: base.name.clone(),
        output_dir: out_dir.to_path_buf(),
        files,
        duration_ms: started.elapsed().as_millis(),
    };
    fs::write(out_dir.join("manifest.json"), manifest_json(base, &manifest))?;
    Ok(manifest)
}

/// profile.csv: `x_mm,U_norm` at 15 significant digits.
fn profile_csv(profile: &[(f64, f64)]) -> Vec<u8> {
    let mut out = String::with_capacity(profile.len() * 48);
    out.push_str("x_mm,U_norm\n");
    for &(x, u) in profile {
        out.push_str(&format!("{:.14e},{:.14e}\n", x * 1e3, u));
    }
    out.into_bytes()
}

/// trajectories.csv: `traj_id,s_mm,x_mm,y_mm,z_mm`.
fn trajectories_csv(trajectories: &[Trajectory]) -> Vec<u8> {
    let samples: usize = trajectories.iter().map(|t| t.samples.len()).sum();
    let mut out = String::with_capacity(samples * 64 + 64);
    out.push_str("traj_id,s_mm,x_mm,y_mm,z_mm\n");
    for (id, trajectory) in trajectories.iter().enumerate() {
        for p in &trajectory.samples {
            out.push_str(&format!(
                "{id},{:.14e},{:.14e},{:.14e},{:.14e}\n",
                p.s * 1e3,
                p.x * 1e3,
                p.y * 1e3,
                p.z * 1e3
            ));
        }
    }
    out.into_bytes()
}

fn fringe_report_json(
    analytic: &FringeReport,
    empirical: Option<&FringeReport>,
    spectral_ratio: Option<f64>,
) -> String {
    let mm = |v: &Vec<f64>| -> Vec<f64> { v.iter().map(|x| x * 1e3).collect() };
    let report = |r: &FringeReport| {
        json!({
            "bright_centers_mm": mm(&r.bright_centers),
            "dark_centers_mm": mm(&r.dark_centers),
            "envelope_zero_mm": r.envelope_zero.map(|x| x * 1e3),
            "visibility": r.visibility,
            "coincidence_order": r.coincidence_order,
            "fringe_spacing_mm": r.fringe_spacing.map(|x| x * 1e3),
        })
    };
    serde_json::to_string_pretty(&json!({
        "analytic": report(analytic),
        "empirical": empirical.map(report),
        "d_scale_spectral_ratio": spectral_ratio,
    }))
    .expect("json")
}

fn manifest_json(scenario: &Scenario, manifest: &RunManifest) -> String {
    serde_json::to_string_pretty(&json!({
        "scenario": {
            "name": scenario.name,
            "wavelength_nm": scenario.wavelength * 1e9,
            "slit_separation_mm": scenario.slit_separation * 1e3,
            "slit_width_mm": scenario.slit_width * 1e3,
            "screen_distance_mm": scenario.screen_distance * 1e3,
            "x_min_mm": scenario.x_min * 1e3,
            "x_max_mm": scenario.x_max * 1e3,
            "n_points": scenario.n_points,
            "profile": format!("{:?}", scenario.profile),
            "polarization": scenario.polarization_label,
            "alpha": scenario.polarization.alpha,
            "beta": scenario.polarization.beta,
            "phi_rad": scenario.polarization.phi,
            "polarizers": format!("{:?}", scenario.polarizers),
            "trajectories": scenario.trajectories,
            "seed": scenario.seed,
        },
        "software_version": env!("CARGO_PKG_VERSION"),
        "files": manifest
            .files
            .iter()
            .map(|f| json!({"name": f.name, "sha256": f.sha256, "bytes": f.bytes}))
            .collect::<Vec<_>>(),
        "duration_ms": manifest.duration_ms,
    }))
    .expect("json")
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileDigest, CliError> {
    let mut file = fs::File::create(dir.join(name))?;
    file.write_all(bytes)?;
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
    Ok(FileDigest {
        name: name.to_string(),
        sha256,
        bytes: bytes.len(),
    })
}

fn profile_plot_script() -> String {
    "set datafile separator \",\"\n\
     set key autotitle columnhead\n\
     set xlabel \"x [mm]\"\n\
     set ylabel \"U / U0\"\n\
     plot \"profile.csv\" using 1:2 with lines\n\
     pause -1\n"
        .to_string()
}

fn trajectories_plot_script() -> String {
    "set datafile separator \",\"\n\
     set key off\n\
     set xlabel \"x [mm]\"\n\
     set ylabel \"y [mm]\"\n\
     plot \"trajectories.csv\" using 3:4 every ::1 with dots\n\
     pause -1\n"
        .to_string()
}
