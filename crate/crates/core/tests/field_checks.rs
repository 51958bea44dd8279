//! Polarization laws and energy observables on screen profiles.

mod common;

use common::{linspace, standard_scenario};
use slitflow::{
    eme_density, free_field, fringe, poynting, scalar_energy_density, screen_profile,
    slit_density, total_wave, IncidentProfile, PolarizationState, Polarizers, Slit, C_LIGHT,
    INCIDENT_DENSITY,
};

const SCREEN: f64 = 0.558;

fn default_grid() -> Vec<f64> {
    linspace(-4e-3, 4e-3, 2001)
}

#[test]
fn incident_wave_energy_is_constant() {
    let (wp, _) = standard_scenario();
    for (_, pol) in PolarizationState::standard_set() {
        for &y in &[1e-3, 0.1, 0.558, 1.9] {
            let f = free_field(y, &wp, &pol);
            assert!((eme_density(&f) - INCIDENT_DENSITY).abs() < 1e-15);
            let s = poynting(&f);
            let flux = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
            assert!((flux - C_LIGHT * INCIDENT_DENSITY).abs() < 1e-15);
        }
    }
}

#[test]
fn profile_independent_of_polarization() {
    // First generalized polarization law: the normalized profile is the
    // same for every incident polarization state.
    let (wp, g) = standard_scenario();
    let grid = default_grid();
    let profiles: Vec<Vec<(f64, f64)>> = PolarizationState::standard_set()
        .iter()
        .map(|(_, pol)| {
            screen_profile(SCREEN, &grid, &wp, &g, &IncidentProfile::Plane, pol, Polarizers::None)
                .unwrap()
        })
        .collect();
    let normalize = |p: &[(f64, f64)]| -> Vec<f64> {
        let max = p.iter().map(|&(_, u)| u).fold(0.0, f64::max);
        p.iter().map(|&(_, u)| u / max).collect()
    };
    let reference = normalize(&profiles[0]);
    for (i, p) in profiles.iter().enumerate().skip(1) {
        let n = normalize(p);
        let max_diff = n
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(
            max_diff < 1e-12,
            "profile {i} deviates by {max_diff:.3e} from the reference state"
        );
    }
}

#[test]
fn density_shortcut_identities_on_profile() {
    // U from assembled fields equals the gradient-form density (open
    // slits) and the per-slit weighted sum (orthogonal polarizers) to
    // machine precision at every grid point.
    let (wp, g) = standard_scenario();
    let grid = linspace(-4e-3, 4e-3, 201);
    let pol = PolarizationState::elliptic(0.8, 0.6, 0.7).unwrap();
    let p = IncidentProfile::Plane;

    let open = screen_profile(SCREEN, &grid, &wp, &g, &p, &pol, Polarizers::None).unwrap();
    for &(x, u) in &open {
        let total = total_wave(x, SCREEN, &wp, &g, &p).unwrap();
        let shortcut = scalar_energy_density(&total, &wp) / INCIDENT_DENSITY;
        assert!((u - shortcut).abs() < 1e-12 * u.max(1.0));
    }

    let orth = screen_profile(SCREEN, &grid, &wp, &g, &p, &pol, Polarizers::Orthogonal).unwrap();
    for &(x, u) in &orth {
        let d1 = slit_density(Slit::One, x, SCREEN, &wp, &g, &p).unwrap();
        let d2 = slit_density(Slit::Two, x, SCREEN, &wp, &g, &p).unwrap();
        let weighted = pol.alpha * pol.alpha * d1 + pol.beta * pol.beta * d2;
        assert!((u - weighted).abs() < 1e-10 * u.max(1.0));
    }
}

#[test]
fn paraxial_density_shortcuts() {
    // On the screen the density reduces to the paraxial forms: |Ψ|²
    // for open slits and α²|ψ₁|² + β²|ψ₂|² with orthogonal polarizers,
    // to about a percent.
    let (wp, g) = standard_scenario();
    let p = IncidentProfile::Plane;
    let pol = PolarizationState::elliptic(0.6, 0.8, -0.4).unwrap();
    let grid = linspace(-3e-3, 3e-3, 301);
    let open = screen_profile(SCREEN, &grid, &wp, &g, &p, &pol, Polarizers::None).unwrap();
    let orth = screen_profile(SCREEN, &grid, &wp, &g, &p, &pol, Polarizers::Orthogonal).unwrap();
    let peak = open.iter().map(|&(_, u)| u).fold(0.0, f64::max);
    for (&(x, u_open), &(_, u_orth)) in open.iter().zip(&orth) {
        if u_open < 1e-3 * peak {
            continue;
        }
        let total = total_wave(x, SCREEN, &wp, &g, &p).unwrap();
        let psi_sq = total.value.norm_sqr();
        assert!(
            (u_open - psi_sq).abs() < 1e-2 * u_open,
            "open-slit paraxial shortcut at x = {x:.3e}"
        );

        let one = slitflow::slit_wave(Slit::One, x, SCREEN, &wp, &g, &p).unwrap();
        let two = slitflow::slit_wave(Slit::Two, x, SCREEN, &wp, &g, &p).unwrap();
        let weighted = pol.alpha * pol.alpha * one.value.norm_sqr()
            + pol.beta * pol.beta * two.value.norm_sqr();
        assert!(
            (u_orth - weighted).abs() < 1e-2 * u_orth.max(1e-3 * peak),
            "orthogonal paraxial shortcut at x = {x:.3e}"
        );
    }
}

#[test]
fn detected_fringe_centers_match_analytic() {
    // Empirical fringe centres from the simulated profile against the
    // analytic predictor, to < 1% of the spacing for orders |n| ≤ 2.
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let profile = screen_profile(
        SCREEN,
        &default_grid(),
        &wp,
        &g,
        &IncidentProfile::Plane,
        &pol,
        Polarizers::None,
    )
    .unwrap();
    let empirical = slitflow::analyze_profile(&profile).unwrap();
    let analytic = slitflow::fringe_centers(&g, &wp, 2).unwrap();
    let spacing = analytic.fringe_spacing.unwrap();

    for &target in &analytic.bright_centers {
        let nearest = empirical
            .bright_centers
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .unwrap();
        assert!(
            (nearest - target).abs() < 0.01 * spacing,
            "bright centre {nearest:.5e} vs analytic {target:.5e}"
        );
    }
    for &target in &analytic.dark_centers {
        let nearest = empirical
            .dark_centers
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .unwrap();
        assert!(
            (nearest - target).abs() < 0.01 * spacing,
            "dark centre {nearest:.5e} vs analytic {target:.5e}"
        );
    }
}

#[test]
fn orthogonal_polarizers_suppress_fringes() {
    // Second law: the orthogonal-polarizer profile carries no spectral
    // power at the fringe frequency d/(λL). Evaluated on a window wide
    // enough that the taper controls truncation leakage.
    let (wp, g) = standard_scenario();
    let grid = linspace(-12e-3, 12e-3, 3001);
    let pol = PolarizationState::circular_right();
    let fringe_freq = g.separation / (wp.wavelength * SCREEN);

    let orth = screen_profile(SCREEN, &grid, &wp, &g, &IncidentProfile::Plane, &pol, Polarizers::Orthogonal)
        .unwrap();
    let ratio = fringe::spectral_ratio(&orth, fringe_freq, true).unwrap();
    assert!(ratio < 1e-6, "orthogonal-config fringe component {ratio:.3e}");

    // Contrast check: the open-slit profile has strong power there.
    let open = screen_profile(SCREEN, &grid, &wp, &g, &IncidentProfile::Plane, &pol, Polarizers::None)
        .unwrap();
    let open_ratio = fringe::spectral_ratio(&open, fringe_freq, true).unwrap();
    assert!(open_ratio > 0.05, "open-config fringe component {open_ratio:.3e}");
}

#[test]
fn central_peak_ratio_four_to_one() {
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let p = IncidentProfile::Plane;
    let grid = linspace(-0.2e-3, 0.2e-3, 101);
    let open = screen_profile(SCREEN, &grid, &wp, &g, &p, &pol, Polarizers::None).unwrap();
    let orth = screen_profile(SCREEN, &grid, &wp, &g, &p, &pol, Polarizers::Orthogonal).unwrap();
    let peak = |p: &[(f64, f64)]| p.iter().map(|&(_, u)| u).fold(0.0, f64::max);
    let ratio = peak(&open) / peak(&orth);
    assert!((ratio - 4.0).abs() < 0.02, "central peak ratio {ratio}");
}

#[test]
fn orthogonal_profile_additivity_with_gaussian_beam() {
    // The additive law holds for a shaped incident beam as well; this
    // exercises the quadrature propagation path end to end.
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_left();
    let beam = IncidentProfile::Gaussian { waist: 1.4e-3 };
    let grid = linspace(-2e-3, 2e-3, 41);
    let orth = screen_profile(SCREEN, &grid, &wp, &g, &beam, &pol, Polarizers::Orthogonal).unwrap();
    for &(x, u) in &orth {
        let d1 = slit_density(Slit::One, x, SCREEN, &wp, &g, &beam).unwrap();
        let d2 = slit_density(Slit::Two, x, SCREEN, &wp, &g, &beam).unwrap();
        let weighted = pol.alpha * pol.alpha * d1 + pol.beta * pol.beta * d2;
        assert!((u - weighted).abs() < 1e-10 * u.max(1.0));
    }
}
