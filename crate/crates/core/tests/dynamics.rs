mod common;

use polar_core::dynamics::*;
use polar_core::equilibrium::{stability_extent, w_from_distance, EquilibriumOrbit};
use polar_core::survey::{classify, Verdict};
use polar_core::{Frame, PhaseState, Star, SystemConfig, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tight() -> IntegratorConfig {
    IntegratorConfig { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() }
}

fn start(w: f64, b: f64) -> (EquilibriumOrbit, SystemConfig, PhaseState) {
    let orbit = EquilibriumOrbit::analyze(w, b).unwrap();
    let cfg = SystemConfig::new(b).unwrap();
    let s0 = initial_conditions(&orbit, &cfg, 0.0, IcConvention::Rotating).unwrap();
    (orbit, cfg, s0)
}

fn to_array(s: &PhaseState) -> [f64; 6] {
    [s.pos.x, s.pos.y, s.pos.z, s.vel.x, s.vel.y, s.vel.z]
}

#[test]
fn adaptive_matches_fixed_step_rk4_in_the_shaded_region() {
    let (_, cfg, s0) = start(0.005, 100.0);
    let period = cfg.stellar_period();
    let traj = integrate(&s0, &cfg, &tight(), period).unwrap();
    let reference = common::rk4(100.0, cfg.omega_s, to_array(&s0), period, 1_000_000);
    let end = traj.last_state;
    let got = Vec3::new(end.pos.x, end.pos.y, end.pos.z);
    let want = Vec3::new(reference[0], reference[1], reference[2]);
    assert!(got.max_abs_diff(want) < 1e-6, "{got:?} vs {want:?}");
}

#[test]
fn acceleration_matches_the_reference_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let b = rng.random_range(1.0..100.0);
        let cfg = SystemConfig::new(b).unwrap();
        let mut c = || rng.random_range(-1.5..1.5);
        let s = PhaseState::new(0.0, Vec3::new(c(), c(), c()), Vec3::new(c(), c(), c()), Frame::Rotating);
        let a = acceleration_rotating(&s, &cfg).unwrap();
        let r = common::rotating_accel(b, cfg.omega_s, &to_array(&s));
        let scale = a.norm().max(1.0);
        assert!(a.max_abs_diff(Vec3::new(r[0], r[1], r[2])) < 1e-12 * scale);
    }
}

#[test]
fn gravity_exerts_no_axial_torque() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..1000 {
        let cfg = SystemConfig::new(rng.random_range(1.0..100.0)).unwrap();
        let mut c = || rng.random_range(-2.0..2.0);
        let pos = Vec3::new(c(), c(), c());
        assert!(gravity_torque_x(pos, &cfg).unwrap().abs() < 1e-14);
        // the same through the total acceleration, up to rounding
        let a = gravity_acceleration(pos, &cfg).unwrap();
        assert!(pos.cross(a).x.abs() < 1e-14 * pos.norm() * a.norm());
    }
}

#[test]
fn collinear_balance_point_between_equal_stars() {
    // independent bisection on the x-axis for zero net rotating-frame force
    for b in [1.0, 3.0, 20.0] {
        let cfg = SystemConfig::new(b).unwrap();
        let ax = |x: f64| common::rotating_accel(b, cfg.omega_s, &[x, 0.0, 0.0, 0.0, 0.0, 0.0])[0];
        let (mut lo, mut hi) = (cfg.x_heavy + 1e-3, cfg.x_light - 1e-3);
        assert!(ax(lo) < 0.0 && ax(hi) > 0.0);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if ax(m) < 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        let x = 0.5 * (lo + hi);
        if b == 1.0 {
            assert!(x.abs() < 1e-15);
        }
        let s = PhaseState::new(0.0, Vec3::new(x, 0.0, 0.0), Vec3::ZERO, Frame::Rotating);
        assert!(acceleration_rotating(&s, &cfg).unwrap().norm() < 1e-10);
        // the same point moves on a circle in the inertial frame and stays put here
        let traj = integrate(&s, &cfg, &tight(), 0.1).unwrap();
        assert!(traj.last_state.pos.max_abs_diff(s.pos) < 1e-10);
    }
}

#[test]
fn forward_then_backward_returns_home() {
    let (_, cfg, s0) = start(0.02, 10.0);
    let icfg = tight();
    let period = cfg.stellar_period();
    let fwd = integrate(&s0, &cfg, &icfg, period).unwrap();
    let back = integrate(&fwd.last_state, &cfg, &icfg, 0.0).unwrap();
    let steps = (fwd.stats.accepted + back.stats.accepted) as f64;
    let scale = s0.pos.norm().max(s0.vel.norm());
    // each accepted step may contribute about rel_tol of relative error
    let bound = icfg.rel_tol * steps * scale;
    let err = back.last_state.pos.max_abs_diff(s0.pos).max(back.last_state.vel.max_abs_diff(s0.vel));
    assert!(err < 100.0 * bound, "{err} vs {bound}");
    assert_eq!(back.last_state.t, 0.0);
}

#[test]
fn halving_the_tolerance_converges() {
    let (_, cfg, s0) = start(0.03, 5.0);
    let period = cfg.stellar_period();
    let run = |rel_tol: f64| {
        let icfg = IntegratorConfig { rel_tol, abs_tol: rel_tol * 1e-2, ..Default::default() };
        integrate(&s0, &cfg, &icfg, period).unwrap().last_state
    };
    let (a, b, reference) = (run(1e-10), run(5e-11), run(1e-13));
    let est = a.pos.max_abs_diff(reference.pos);
    let change = a.pos.max_abs_diff(b.pos);
    assert!(change < 10.0 * est, "{change} vs {est}");
}

#[test]
fn motionless_stars_keep_the_circle() {
    for (w, b) in [(0.005, 100.0), (0.05, 1.0), (0.1, 4.0), (0.99, 30.0)] {
        let (orbit, cfg, s0) = start(w, b);
        let cfg = cfg.motionless();
        let t_end = 10.0 * 2.0 * std::f64::consts::PI / orbit.f_p;
        let traj = integrate(&s0, &cfg, &tight(), t_end).unwrap();
        let x = cfg.axial_x(w);
        for s in traj.states() {
            let radius = s.pos.y.hypot(s.pos.z);
            assert!((radius - orbit.v0).abs() < 1e-9, "({w}, {b}) t = {}", s.t);
            assert!((s.pos.x - x).abs() < 1e-9);
        }
    }
}

#[test]
fn jacobi_constant_is_conserved() {
    for (w, b) in [(0.005, 100.0), (0.02, 1.0), (0.1, 3.0), (0.97, 8.0)] {
        let (_, cfg, s0) = start(w, b);
        let traj = integrate(&s0, &cfg, &tight(), cfg.stellar_period()).unwrap();
        assert!(!traj.aborted());
        assert!(traj.jacobi_drift() < 1e-9, "({w}, {b}): {}", traj.jacobi_drift());
        assert!(traj.torque_residual() < 1e-6, "({w}, {b}): {}", traj.torque_residual());
    }
}

#[test]
fn close_fast_orbit_is_planar() {
    let (_, cfg, s0) = start(0.001, 1.0);
    let traj = integrate(&s0, &cfg, &tight(), cfg.stellar_period()).unwrap();
    let c = classify(&traj).unwrap();
    assert_eq!(c.verdict, Verdict::Planar);
    assert!(c.m_not_conserved());
}

#[test]
fn orbit_at_the_stability_edge_escapes() {
    let b = 2.955;
    let w = w_from_distance(Star::Lighter, 0.98 * stability_extent(Star::Lighter, b).unwrap());
    let (_, cfg, s0) = start(w, b);
    let period = cfg.stellar_period();
    let traj = integrate(&s0, &cfg, &tight(), period).unwrap();
    assert_eq!(classify(&traj).unwrap().verdict, Verdict::Unbound);

    // the reference integrator reaches the same positive energy
    let y = common::rk4(b, cfg.omega_s, to_array(&s0), period, 1_000_000);
    let end = PhaseState::new(period, Vec3::new(y[0], y[1], y[2]), Vec3::new(y[3], y[4], y[5]), Frame::Rotating);
    assert!(star_centric_energy(&end, &cfg, Star::Lighter).unwrap() > 0.0);
}

#[test]
fn samples_are_uniform_and_span_the_period() {
    let (_, cfg, s0) = start(0.05, 2.0);
    let traj = integrate(&s0, &cfg, &IntegratorConfig::default(), cfg.stellar_period()).unwrap();
    assert_eq!(traj.samples.len(), 10_000);
    assert_eq!(traj.samples[0].state.t, 0.0);
    assert_eq!(traj.samples.last().unwrap().state.t, cfg.stellar_period());
    assert!(traj.samples.windows(2).all(|p| p[1].state.t > p[0].state.t));
    assert_eq!(traj.samples[0].m, EquilibriumOrbit::analyze(0.05, 2.0).unwrap().m0);
}
