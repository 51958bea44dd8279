//! Detection-event sampling for single-photon pattern buildup.
//!
//! Events are drawn from a screen profile by inverse-CDF sampling of
//! the piecewise-linear density defined by the profile samples, with a
//! seeded deterministic generator: suitable for animating the gradual
//! appearance of the pattern event by event.

use slitflow::rng::SplitMix64;

use crate::error::CliError;

/// Draw `count` detection positions from a sampled density profile.
pub fn sample_detections(
    profile: &[(f64, f64)],
    count: usize,
    seed: u64,
) -> Result<Vec<f64>, CliError> {
    if count == 0 {
        return Err(CliError::validation("detection count must be ≥ 1"));
    }
    if profile.len() < 2 {
        return Err(CliError::validation("profile needs at least two samples"));
    }
    if profile.iter().any(|&(_, u)| !u.is_finite() || u < 0.0) {
        return Err(CliError::validation("profile must be non-negative and finite"));
    }

    // Cumulative trapezoid masses per segment.
    let mut cumulative = Vec::with_capacity(profile.len());
    cumulative.push(0.0f64);
    for pair in profile.windows(2) {
        let ((x0, u0), (x1, u1)) = (pair[0], pair[1]);
        let mass = 0.5 * (u0 + u1) * (x1 - x0);
        cumulative.push(cumulative.last().unwrap() + mass);
    }
    let total = *cumulative.last().unwrap();
    if total <= 0.0 || total.is_nan() {
        return Err(CliError::validation("profile has zero total mass"));
    }

    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let mut rng = SplitMix64::substream(seed, index as u64);
        let target = rng.next_f64() * total;
        let segment = cumulative
            .partition_point(|&c| c <= target)
            .clamp(1, profile.len() - 1);
        let (x0, u0) = profile[segment - 1];
        let (x1, u1) = profile[segment];
        let width = x1 - x0;
        let remainder = target - cumulative[segment - 1];
        // Invert the linear-density CDF within the segment:
        // remainder = u0·w·τ + (u1-u0)·w·τ²/2. The form below stays
        // stable as either coefficient approaches zero.
        let a = 0.5 * (u1 - u0) * width;
        let b = u0 * width;
        let discriminant = (b * b + 4.0 * a * remainder).max(0.0);
        let tau = if a.abs() < 1e-300 && b.abs() < 1e-300 {
            0.5
        } else {
            2.0 * remainder / (b + discriminant.sqrt())
        };
        out.push(x0 + tau.clamp(0.0, 1.0) * width);
    }
    Ok(out)
}
