//! Flow-line integration: topology, polarization invariance,
//! convergence and determinism.

mod common;

use common::standard_scenario;
use slitflow::{
    endpoint_histogram, flow_velocity, free_field, integrate_bundle, integrate_trajectory,
    IncidentProfile, IntegrationControls, LaunchDistribution, LaunchPlan, PolarizationState,
    Polarizers, Termination,
};

const SCREEN: f64 = 0.558;

fn launch_plan() -> LaunchPlan {
    LaunchPlan {
        count_per_slit: 15,
        y0: 10.0 * 532.5e-9,
        distribution: LaunchDistribution::Uniform,
    }
}

#[test]
fn free_wave_velocity_is_unit_forward() {
    let (wp, _) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let f = free_field(0.25, &wp, &pol);
    let u = slitflow::eme_density(&f);
    let s = slitflow::poynting(&f);
    assert!((s[1] / u - 1.0).abs() < 1e-12);
    assert!((s[0] / u).abs() < 1e-15);
}

#[test]
fn standard_bundle_topology() {
    // 30 trajectories, circular polarization, open slits: every flow
    // line stays on its launch side, is monotone in y and s, respects
    // the light-speed bound, and slit-one lines land at x < 0.
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let plan = launch_plan();
    let launches = plan.launch_points(&g, &IncidentProfile::Plane, 0).unwrap();
    let controls = IntegrationControls::default();
    let trajectories = integrate_bundle(
        &launches,
        &wp,
        &g,
        &IncidentProfile::Plane,
        &pol,
        Polarizers::None,
        SCREEN,
        &controls,
    )
    .unwrap();

    assert_eq!(trajectories.len(), 30);
    for (i, t) in trajectories.iter().enumerate() {
        assert_eq!(t.termination, Termination::ReachedScreen, "trajectory {i}");
        assert!(t.max_flow_speed <= 1.0 + 1e-9, "speed bound on {i}");
        let sign = t.launch[0].signum();
        let mut prev_s = f64::NEG_INFINITY;
        let mut prev_y = 0.0;
        for p in &t.samples {
            assert!(p.s > prev_s, "s not strictly increasing on {i}");
            // The edge-wave interference zone within a few tens of
            // wavelengths of the grating holds genuine backflow pockets
            // (S_y < 0) that dip y by ≲0.1 µm; beyond it the flow is
            // strictly forward.
            if p.y > 50e-6 {
                assert!(p.y >= prev_y, "y decreasing on {i} at y = {:.3e}", p.y);
            } else {
                assert!(p.y >= prev_y - 5e-7, "deep backflow on {i}");
            }
            assert!(p.x.signum() == sign, "trajectory {i} crossed the axis");
            prev_s = p.s;
            prev_y = p.y;
        }
        let end = t.endpoint();
        assert!((end.y - SCREEN).abs() < 1e-12);
        if i < 15 {
            assert!(end.x < 0.0, "slit-one endpoint {i} at x = {}", end.x);
        } else {
            assert!(end.x > 0.0, "slit-two endpoint {i} at x = {}", end.x);
        }
    }
}

#[test]
fn velocity_routes_agree() {
    // The trajectory-equation route used by the integrator against
    // ½Re(E×H*)/(cU) from the assembled vector fields; the two are
    // algebraically identical.
    let (wp, g) = standard_scenario();
    let p = IncidentProfile::Plane;
    for (_, pol) in PolarizationState::standard_set() {
        for pcfg in [Polarizers::None, Polarizers::Orthogonal] {
            for i in 0..25 {
                let x = -2.2e-3 + 4.4e-3 * (i as f64 + 0.5) / 25.0;
                let y = 2e-4 + 0.55 * (i as f64 * 0.37).fract();
                let v = flow_velocity([x, y, 0.0], &wp, &g, &p, &pol, pcfg).unwrap();
                let f = slitflow::assemble_fields(x, y, &wp, &g, &p, &pol, pcfg).unwrap();
                let u = slitflow::eme_density(&f);
                let s = slitflow::poynting(&f);
                for c in 0..3 {
                    let reference = s[c] / u;
                    assert!(
                        (v[c] - reference).abs() < 1e-12 * reference.abs().max(1.0),
                        "route mismatch comp {c} at ({x:.3e}, {y:.3e}): {} vs {reference}",
                        v[c]
                    );
                }
            }
        }
    }
}

#[test]
fn xy_dynamics_independent_of_polarization() {
    // The in-plane velocity field, which alone drives the XY path, is
    // the same for every polarization state: the α, β, φ factors cancel
    // between S and U. Checked at field level to rounding precision.
    let (wp, g) = standard_scenario();
    let states = PolarizationState::standard_set();
    for i in 0..60 {
        let x = -2.5e-3 + 5e-3 * (i as f64 + 0.5) / 60.0;
        let y = 1e-4 + 0.55 * (i as f64 * 0.618).fract();
        let vref = flow_velocity([x, y, 0.0], &wp, &g, &IncidentProfile::Plane, &states[0].1, Polarizers::None)
            .unwrap();
        for (name, pol) in &states[1..] {
            let v = flow_velocity([x, y, 0.0], &wp, &g, &IncidentProfile::Plane, pol, Polarizers::None)
                .unwrap();
            assert!(
                (v[0] - vref[0]).abs() < 1e-14 && (v[1] - vref[1]).abs() < 1e-14,
                "in-plane velocity differs for {name} at ({x:.3e}, {y:.3e})"
            );
        }
    }
}

#[test]
fn xy_projection_independent_of_polarization() {
    // Integrated form of the invariant above: the polarization factors
    // never enter the in-plane velocity, so the accepted samples carry
    // bit-identical (x, y) for every state.
    let (wp, g) = standard_scenario();
    let launch = [-0.125e-3 + 17e-6, 10.0 * 532.5e-9, 0.0];
    let controls = IntegrationControls::default();
    let states = PolarizationState::standard_set();
    let reference = integrate_trajectory(
        launch,
        &wp,
        &g,
        &IncidentProfile::Plane,
        &states[0].1,
        Polarizers::None,
        SCREEN,
        &controls,
    )
    .unwrap();
    for (name, pol) in &states[1..] {
        let t = integrate_trajectory(
            launch,
            &wp,
            &g,
            &IncidentProfile::Plane,
            pol,
            Polarizers::None,
            SCREEN,
            &controls,
        )
        .unwrap();
        assert_eq!(t.samples.len(), reference.samples.len(), "step count for {name}");
        for (a, b) in t.samples.iter().zip(&reference.samples) {
            assert!((a.x - b.x).abs() < 1e-9, "x deviation for {name}");
            assert!((a.y - b.y).abs() < 1e-9, "y deviation for {name}");
        }
    }
}

#[test]
fn phase_sign_flips_z_but_not_xy() {
    let (wp, g) = standard_scenario();
    let launch = [0.125e-3 - 11e-6, 10.0 * 532.5e-9, 0.0];
    let controls = IntegrationControls::default();
    let right = integrate_trajectory(
        launch,
        &wp,
        &g,
        &IncidentProfile::Plane,
        &PolarizationState::circular_right(),
        Polarizers::None,
        SCREEN,
        &controls,
    )
    .unwrap();
    let left = integrate_trajectory(
        launch,
        &wp,
        &g,
        &IncidentProfile::Plane,
        &PolarizationState::circular_left(),
        Polarizers::None,
        SCREEN,
        &controls,
    )
    .unwrap();
    assert_eq!(right.samples.len(), left.samples.len());
    let mut max_z: f64 = 0.0;
    for (r, l) in right.samples.iter().zip(&left.samples) {
        assert!((r.x - l.x).abs() < 1e-9);
        assert!((r.y - l.y).abs() < 1e-9);
        // Mirror z-drift.
        assert!((r.z + l.z).abs() < 1e-12);
        max_z = max_z.max(r.z.abs());
    }
    // Circular polarization does drift out of plane.
    assert!(max_z > 0.0, "no z-motion for circular polarization");
}

#[test]
fn linear_polarization_stays_in_plane() {
    let (wp, g) = standard_scenario();
    let launch = [-0.125e-3 - 23e-6, 10.0 * 532.5e-9, 0.0];
    let controls = IntegrationControls::default();
    for angle in [0.0, 45f64.to_radians(), 90f64.to_radians()] {
        let t = integrate_trajectory(
            launch,
            &wp,
            &g,
            &IncidentProfile::Plane,
            &PolarizationState::linear(angle),
            Polarizers::None,
            SCREEN,
            &controls,
        )
        .unwrap();
        for p in &t.samples {
            assert!(p.z.abs() < 1e-12, "z drift {} for linear", p.z);
        }
    }
}

#[test]
fn step_halving_stability() {
    // Halving every step-control length changes endpoints by < 1e-8 m.
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let plan = launch_plan();
    let launches = plan.launch_points(&g, &IncidentProfile::Plane, 0).unwrap();
    let coarse = IntegrationControls::default();
    let fine = coarse.refined();

    let run = |controls: &IntegrationControls| {
        integrate_bundle(
            &launches,
            &wp,
            &g,
            &IncidentProfile::Plane,
            &pol,
            Polarizers::None,
            SCREEN,
            controls,
        )
        .unwrap()
    };
    let a = run(&coarse);
    let b = run(&fine);
    let mut worst = 0.0f64;
    for (ta, tb) in a.iter().zip(&b) {
        let dx = (ta.endpoint().x - tb.endpoint().x).abs();
        worst = worst.max(dx);
    }
    println!("step-halving worst endpoint shift: {worst:.3e} m");
    assert!(worst < 1e-8, "endpoint instability {worst:.3e} m");
}

#[test]
fn bundle_deterministic_across_thread_counts() {
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let plan = LaunchPlan {
        count_per_slit: 4,
        ..launch_plan()
    };
    let launches = plan.launch_points(&g, &IncidentProfile::Plane, 7).unwrap();
    let controls = IntegrationControls::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            integrate_bundle(
                &launches,
                &wp,
                &g,
                &IncidentProfile::Plane,
                &pol,
                Polarizers::None,
                SCREEN,
                &controls,
            )
            .unwrap()
        })
    };
    let serial = run(1);
    let parallel = run(4);
    assert_eq!(serial.len(), parallel.len());
    for (a, b) in serial.iter().zip(&parallel) {
        assert_eq!(a.samples.len(), b.samples.len());
        for (pa, pb) in a.samples.iter().zip(&b.samples) {
            assert_eq!(pa.x.to_bits(), pb.x.to_bits());
            assert_eq!(pa.y.to_bits(), pb.y.to_bits());
            assert_eq!(pa.z.to_bits(), pb.z.to_bits());
        }
    }
}

#[test]
fn stagnation_region_reports_error() {
    // A synthetic stagnation threshold far above any physical density
    // forces the stagnation signal.
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let controls = IntegrationControls {
        stagnation_fraction: 1e9,
        ..IntegrationControls::default()
    };
    let launch = [-0.125e-3, 10.0 * 532.5e-9, 0.0];
    let t = integrate_trajectory(
        launch,
        &wp,
        &g,
        &IncidentProfile::Plane,
        &pol,
        Polarizers::None,
        SCREEN,
        &controls,
    )
    .unwrap();
    assert_eq!(t.termination, Termination::Stagnation);
    let err = endpoint_histogram(&[t], &[-1e-3, 0.0, 1e-3]);
    assert!(err.is_err());
}

#[test]
fn velocity_outside_domain_errors() {
    let (wp, g) = standard_scenario();
    let pol = PolarizationState::circular_right();
    let r = flow_velocity([0.0, -0.1, 0.0], &wp, &g, &IncidentProfile::Plane, &pol, Polarizers::None);
    assert!(r.is_err());
}
