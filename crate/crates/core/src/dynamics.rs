//! Planet motion in the frame co-rotating with a circular binary.
//!
//! Both stars sit at rest on the x-axis of the rotating frame, so the
//! equations of motion are autonomous:
//!
//! ```text
//! a = a_grav + 2 w (v_y, -v_x, 0) + w^2 (x, y, 0)
//! ```

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::equilibrium::EquilibriumOrbit;
use crate::integrator::{self, Failure, OdeSystem, Stats, StepControl};
use crate::system::rotating_to_inertial;
use crate::torque::{axial_angular_momentum, centrifugal_torque, coriolis_torque};
use crate::{Error, Frame, PhaseState, Result, Star, SystemConfig, Vec3};

/// Integration stops once the planet comes this close to a star.
pub const ENCOUNTER_RADIUS: f64 = 1e-8;

fn star_offsets(pos: Vec3, cfg: &SystemConfig) -> Result<(Vec3, f64, Vec3, f64)> {
    let d_light = pos - cfg.star_position(Star::Lighter);
    let d_heavy = pos - cfg.star_position(Star::Heavier);
    let r_light = d_light.norm();
    let r_heavy = d_heavy.norm();
    if r_light < ENCOUNTER_RADIUS || r_heavy < ENCOUNTER_RADIUS {
        return Err(Error::Singularity("planet within the encounter radius of a star"));
    }
    Ok((d_light, r_light, d_heavy, r_heavy))
}

/// Newtonian attraction of both stars.
pub fn gravity_acceleration(pos: Vec3, cfg: &SystemConfig) -> Result<Vec3> {
    let (d1, r1, d2, r2) = star_offsets(pos, cfg)?;
    Ok(d1 * (-1.0 / (r1 * r1 * r1)) + d2 * (-cfg.heavy_mass / (r2 * r2 * r2)))
}

/// Total acceleration in the rotating frame: gravity plus the Coriolis and
/// centrifugal terms.
pub fn acceleration_rotating(s: &PhaseState, cfg: &SystemConfig) -> Result<Vec3> {
    s.expect_frame(Frame::Rotating)?;
    let w = cfg.omega_s;
    let g = gravity_acceleration(s.pos, cfg)?;
    let coriolis = Vec3::new(s.vel.y, -s.vel.x, 0.0) * (2.0 * w);
    let centrifugal = Vec3::new(s.pos.x, s.pos.y, 0.0) * (w * w);
    Ok(g + coriolis + centrifugal)
}

/// Axial (x) component of the gravitational torque about the origin, summed
/// star by star.
pub fn gravity_torque_x(pos: Vec3, cfg: &SystemConfig) -> Result<f64> {
    let (d1, r1, d2, r2) = star_offsets(pos, cfg)?;
    let from_light = pos.cross(d1) * (-1.0 / (r1 * r1 * r1));
    let from_heavy = pos.cross(d2) * (-cfg.heavy_mass / (r2 * r2 * r2));
    Ok(from_light.x + from_heavy.x)
}

/// Jacobi integral `w^2 (x^2 + y^2) + 2/r_light + 2 m_heavy/r_heavy - |v|^2`.
pub fn jacobi_constant(s: &PhaseState, cfg: &SystemConfig) -> Result<f64> {
    s.expect_frame(Frame::Rotating)?;
    let (_, r1, _, r2) = star_offsets(s.pos, cfg)?;
    let w2 = cfg.omega_s * cfg.omega_s;
    Ok(w2 * (s.pos.x * s.pos.x + s.pos.y * s.pos.y) + 2.0 / r1 + 2.0 * cfg.heavy_mass / r2 - s.vel.norm_squared())
}

/// Specific two-body energy of the planet relative to `star`, evaluated in
/// the inertial frame.
pub fn star_centric_energy(s: &PhaseState, cfg: &SystemConfig, star: Star) -> Result<f64> {
    let planet = match s.frame {
        Frame::Rotating => rotating_to_inertial(s, cfg.omega_s)?,
        Frame::Inertial => *s,
    };
    let host = cfg.star_inertial(star, s.t);
    let rel = planet.pos - host.pos;
    let r = rel.norm();
    if r < ENCOUNTER_RADIUS {
        return Err(Error::Singularity("planet at the star"));
    }
    Ok(0.5 * (planet.vel - host.vel).norm_squared() - cfg.star_mass(star) / r)
}

/// The star nearer to a rotating-frame position.
pub fn closest_star(pos: Vec3, cfg: &SystemConfig) -> Star {
    let d1 = (pos - cfg.star_position(Star::Lighter)).norm_squared();
    let d2 = (pos - cfg.star_position(Star::Heavier)).norm_squared();
    if d1 <= d2 {
        Star::Lighter
    } else {
        Star::Heavier
    }
}

/// How the motionless-star velocity is carried over once the stars orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum IcConvention {
    /// Use the circular-orbit velocity as the rotating-frame velocity.
    #[default]
    Rotating,
    /// Treat it as an inertial velocity and subtract the frame motion.
    Inertial,
}

/// Rotating-frame state at `t = 0` on the motionless-star circular orbit.
///
/// The planet sits at angle `phase` around the axis, measured from +y toward
/// +z, and moves in the positive sense so that `M(0) = f_p v0^2`.
pub fn initial_conditions(
    orbit: &EquilibriumOrbit,
    cfg: &SystemConfig,
    phase: f64,
    convention: IcConvention,
) -> Result<PhaseState> {
    if !(orbit.v0 > 0.0) {
        return Err(Error::Domain("equilibrium orbit has no radius"));
    }
    let (s, c) = libm::sincos(phase);
    let pos = Vec3::new(cfg.axial_x(orbit.w), orbit.v0 * c, orbit.v0 * s);
    let speed = orbit.f_p * orbit.v0;
    let circular = Vec3::new(0.0, -speed * s, speed * c);
    let vel = match convention {
        IcConvention::Rotating => circular,
        IcConvention::Inertial => circular - (Vec3::Z * cfg.omega_s).cross(pos),
    };
    Ok(PhaseState::new(0.0, pos, vel, Frame::Rotating))
}

/// Tolerances and output density for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Number of uniformly spaced output samples over the integration span.
    pub dense_samples: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-14, max_step: f64::INFINITY, dense_samples: 10_000 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(self.rel_tol) || !in_unit(self.abs_tol) {
            return Err(Error::Domain("tolerances must lie in (0, 1)"));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::Domain("max_step must be positive"));
        }
        if self.dense_samples < 1000 {
            return Err(Error::Domain("dense_samples must be at least 1000"));
        }
        Ok(())
    }

    fn step_control(&self) -> StepControl {
        StepControl { rel_tol: self.rel_tol, abs_tol: self.abs_tol, max_step: self.max_step, ..StepControl::default() }
    }
}

/// Equations of motion in the rotating frame, as a first-order system.
#[derive(Debug, Clone, Copy)]
pub struct RotatingFrameEom<'a> {
    pub cfg: &'a SystemConfig,
}

impl OdeSystem<6> for RotatingFrameEom<'_> {
    type Error = Error;

    fn derivative(&self, t: f64, y: &[f64; 6], dy: &mut [f64; 6]) -> Result<()> {
        let s = PhaseState::from_array(t, y, Frame::Rotating);
        let a = acceleration_rotating(&s, self.cfg)?;
        *dy = [y[3], y[4], y[5], a.x, a.y, a.z];
        Ok(())
    }
}

/// One output sample with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Sample {
    pub state: PhaseState,
    pub m: f64,
    /// `dM/dt` from the derivative of the integrator's continuous extension.
    pub m_rate: f64,
    pub jacobi: f64,
    pub r_light: f64,
    pub r_heavy: f64,
    pub e_star: f64,
}

impl Sample {
    /// `rate` is the time derivative of `(pos, vel)` at the sample.
    pub fn new(state: PhaseState, rate: &[f64; 6], cfg: &SystemConfig, host: Star) -> Result<Self> {
        let (_, r_light, _, r_heavy) = star_offsets(state.pos, cfg)?;
        let (p, v) = (state.pos, state.vel);
        Ok(Self {
            state,
            m: axial_angular_momentum(&state),
            m_rate: rate[1] * v.z + p.y * rate[5] - rate[2] * v.y - p.z * rate[4],
            jacobi: jacobi_constant(&state, cfg)?,
            r_light,
            r_heavy,
            e_star: star_centric_energy(&state, cfg, host)?,
        })
    }
}

/// Dense rotating-frame samples of one integration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub cfg: SystemConfig,
    /// Star nearest to the planet at the start; energies refer to it.
    pub host: Star,
    pub samples: Vec<Sample>,
    /// Set when the integration stopped before `t_end`.
    pub failure: Option<Error>,
    /// State where the integration ended (the abort point on failure).
    pub last_state: PhaseState,
    pub stats: Stats,
}

impl Trajectory {
    pub fn aborted(&self) -> bool {
        self.failure.is_some()
    }

    /// Largest `|C(t) - C(0)| / |C(0)|` over the samples.
    pub fn jacobi_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let c0 = first.jacobi;
        self.samples.iter().map(|s| (s.jacobi - c0).abs()).fold(0.0, f64::max) / c0.abs()
    }

    /// Largest `|dM/dt - T1 - T2|` over the samples, with `dM/dt` taken from
    /// the continuous extension rather than from the equations of motion.
    pub fn torque_residual(&self) -> f64 {
        let w = self.cfg.omega_s;
        self.samples
            .iter()
            .map(|s| (s.m_rate - coriolis_torque(&s.state, w) - centrifugal_torque(&s.state, w)).abs())
            .fold(0.0, f64::max)
    }

    pub fn states(&self) -> impl Iterator<Item = &PhaseState> + '_ {
        self.samples.iter().map(|s| &s.state)
    }
}

/// Integrate a rotating-frame state from its time `s0.t` to `t_end`.
///
/// A close encounter or step-size collapse does not fail the call; the
/// trajectory is returned up to that point with `failure` set to
/// [`Error::StepFailure`].
pub fn integrate(s0: &PhaseState, cfg: &SystemConfig, icfg: &IntegratorConfig, t_end: f64) -> Result<Trajectory> {
    s0.expect_frame(Frame::Rotating)?;
    icfg.validate()?;
    if t_end == s0.t || !t_end.is_finite() {
        return Err(Error::Domain("t_end must be finite and differ from the start time"));
    }
    let host = closest_star(s0.pos, cfg);
    let eom = RotatingFrameEom { cfg };
    let sol = integrator::solve_dense(&eom, s0.t, s0.to_array(), t_end, icfg.dense_samples, &icfg.step_control());

    let samples = sol
        .times
        .iter()
        .zip(&sol.states)
        .zip(&sol.rates)
        .map(|((&t, y), r)| Sample::new(PhaseState::from_array(t, y, Frame::Rotating), r, cfg, host))
        .collect::<Result<Vec<_>>>()?;
    // every kind of early stop surfaces as a step failure at the abort time
    let failure = sol.failure.map(|(t, _): (f64, Failure<Error>)| Error::StepFailure { t });
    Ok(Trajectory {
        cfg: *cfg,
        host,
        samples,
        failure,
        last_state: PhaseState::from_array(sol.last_t, &sol.last_y, Frame::Rotating),
        stats: sol.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn motionless_frame_is_pure_gravity() {
        let cfg = SystemConfig::new(3.0).unwrap().motionless();
        let s = PhaseState::new(0.0, Vec3::new(0.1, 0.4, -0.2), Vec3::new(1.0, 2.0, 3.0), Frame::Rotating);
        let a = acceleration_rotating(&s, &cfg).unwrap();
        assert_eq!(a, gravity_acceleration(s.pos, &cfg).unwrap());
    }

    #[test]
    fn centrifugal_term_at_rest() {
        let cfg = SystemConfig::new(1.0).unwrap();
        let pos = Vec3::new(0.0, 1.0, 0.0);
        let s = PhaseState::new(0.0, pos, Vec3::ZERO, Frame::Rotating);
        let frame_part = acceleration_rotating(&s, &cfg).unwrap() - gravity_acceleration(pos, &cfg).unwrap();
        assert!(frame_part.max_abs_diff(Vec3::new(0.0, 2.0, 0.0)) < 1e-15);
    }

    #[test]
    fn encounter_is_singular() {
        let cfg = SystemConfig::new(2.0).unwrap();
        let s = PhaseState::new(0.0, cfg.star_position(Star::Heavier), Vec3::ZERO, Frame::Rotating);
        assert!(matches!(acceleration_rotating(&s, &cfg), Err(Error::Singularity(_))));
        assert!(jacobi_constant(&s, &cfg).is_err());
    }

    #[test]
    fn jacobi_of_static_state() {
        let cfg = SystemConfig::new(1.0).unwrap();
        let s = PhaseState::new(0.0, Vec3::new(0.0, 1.0, 0.0), Vec3::ZERO, Frame::Rotating);
        let r = libm::hypot(0.5, 1.0);
        let expected = 2.0 + 2.0 / r + 2.0 / r;
        assert!((jacobi_constant(&s, &cfg).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn jacobi_reflection_symmetry() {
        let cfg = SystemConfig::new(2.5).unwrap();
        let s = PhaseState::new(0.0, Vec3::new(0.2, 0.3, -0.4), Vec3::new(0.5, -1.0, 0.7), Frame::Rotating);
        let mirrored = PhaseState::new(
            0.0,
            Vec3::new(s.pos.x, -s.pos.y, -s.pos.z),
            Vec3::new(s.vel.x, -s.vel.y, -s.vel.z),
            Frame::Rotating,
        );
        assert_eq!(jacobi_constant(&s, &cfg).unwrap(), jacobi_constant(&mirrored, &cfg).unwrap());
    }

    #[test]
    fn circular_two_body_energy() {
        let cfg = SystemConfig::new(1.0).unwrap().motionless().without_companion();
        let r = 0.3;
        let speed = libm::sqrt(1.0 / r);
        let s = PhaseState::new(
            0.0,
            cfg.star_position(Star::Lighter) + Vec3::new(0.0, r, 0.0),
            Vec3::new(0.0, 0.0, speed),
            Frame::Rotating,
        );
        let e = star_centric_energy(&s, &cfg, Star::Lighter).unwrap();
        assert!((e + 1.0 / (2.0 * r)).abs() < 1e-14);
    }

    #[test]
    fn distant_planet_at_rest_is_unbound_from_a_moving_star() {
        let cfg = SystemConfig::new(1.0).unwrap();
        let s = PhaseState::new(0.0, Vec3::new(1e6, 0.0, 0.0), Vec3::ZERO, Frame::Inertial);
        let e = star_centric_energy(&s, &cfg, Star::Lighter).unwrap();
        let v_star = cfg.omega_s * cfg.x_light;
        assert!(e > 0.0);
        assert!((e - 0.5 * v_star * v_star).abs() < 2e-6);
    }

    #[test]
    fn initial_conditions_at_zero_phase() {
        let orbit = EquilibriumOrbit::analyze(0.2, 2.0).unwrap();
        let cfg = SystemConfig::new(2.0).unwrap();
        let s = initial_conditions(&orbit, &cfg, 0.0, IcConvention::Rotating).unwrap();
        assert_eq!(s.pos, Vec3::new(cfg.x_light - 0.2, orbit.v0, 0.0));
        assert_eq!(s.vel, Vec3::new(0.0, 0.0, orbit.f_p * orbit.v0));
        assert!((axial_angular_momentum(&s) - orbit.m0).abs() < 1e-14 * orbit.m0);

        let i = initial_conditions(&orbit, &cfg, 0.0, IcConvention::Inertial).unwrap();
        let inertial = rotating_to_inertial(&i, cfg.omega_s).unwrap();
        assert!(inertial.vel.max_abs_diff(Vec3::new(0.0, 0.0, orbit.f_p * orbit.v0)) < 1e-15);
    }

    #[test]
    fn config_validation() {
        let ok = IntegratorConfig::default();
        assert!(ok.validate().is_ok());
        assert!(IntegratorConfig { dense_samples: 10, ..ok }.validate().is_err());
        assert!(IntegratorConfig { rel_tol: 0.0, ..ok }.validate().is_err());
        assert!(IntegratorConfig { abs_tol: 2.0, ..ok }.validate().is_err());
    }

    #[test]
    fn integrate_rejects_inertial_start() {
        let cfg = SystemConfig::new(1.0).unwrap();
        let s = PhaseState::new(0.0, Vec3::new(0.0, 1.0, 0.0), Vec3::ZERO, Frame::Inertial);
        assert!(integrate(&s, &cfg, &IntegratorConfig::default(), 1.0).is_err());
        let r = PhaseState { frame: Frame::Rotating, ..s };
        assert!(integrate(&r, &cfg, &IntegratorConfig::default(), 0.0).is_err());
    }

    #[test]
    fn kepler_circle_without_companion() {
        // planet on a circular orbit about an isolated unit mass
        let cfg = SystemConfig::new(1.0).unwrap().motionless().without_companion();
        let r = 0.2;
        let speed = libm::sqrt(1.0 / r);
        let center = cfg.star_position(Star::Lighter);
        let s0 = PhaseState::new(0.0, center + Vec3::new(0.0, r, 0.0), Vec3::new(0.0, 0.0, speed), Frame::Rotating);
        let period = 2.0 * core::f64::consts::PI * r / speed;
        let traj = integrate(&s0, &cfg, &IntegratorConfig::default(), period).unwrap();
        assert!(!traj.aborted());
        for s in &traj.samples {
            assert!(((s.state.pos - center).norm() - r).abs() < 1e-9);
        }
        assert!(traj.last_state.pos.max_abs_diff(s0.pos) < 1e-9);
        assert_eq!(traj.host, Star::Lighter);
    }
}
