//! Scaled binary geometry, phase-space states and frame transformations.
//!
//! The rotating frame co-rotates with the circular binary at `omega_s` about
//! the z-axis, with the center of mass at the origin and both stars on the
//! x-axis. The +x direction points from the heavier star to the lighter one.

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// One of the two stars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Star {
    Lighter,
    Heavier,
}

impl Star {
    pub fn name(self) -> &'static str {
        match self {
            Star::Lighter => "lighter",
            Star::Heavier => "heavier",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Frame {
    Inertial,
    Rotating,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Inertial => "inertial",
            Frame::Rotating => "rotating",
        }
    }
}

/// Kepler angular frequency of the binary, `sqrt(1 + b)`.
///
/// The lighter star must carry the unit mass, so `b < 1` is rejected.
pub fn kepler_frequency(b: f64) -> Result<f64> {
    if !(b >= 1.0) || !b.is_finite() {
        return Err(Error::Domain("mass ratio b must be finite and >= 1"));
    }
    Ok(libm::sqrt(1.0 + b))
}

/// Mass ratio and the scaled constants derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SystemConfig {
    /// Heavier-to-lighter mass ratio.
    pub b: f64,
    /// Angular frequency of the binary (and of the rotating frame).
    pub omega_s: f64,
    pub x_light: f64,
    pub x_heavy: f64,
    /// Gravitating mass of the heavier star; equal to `b` except in the
    /// two-body test configuration.
    pub heavy_mass: f64,
}

impl SystemConfig {
    pub fn new(b: f64) -> Result<Self> {
        let omega_s = kepler_frequency(b)?;
        Ok(Self { b, omega_s, x_light: b / (1.0 + b), x_heavy: -1.0 / (1.0 + b), heavy_mass: b })
    }

    /// Same geometry with the stars held motionless (`omega_s = 0`).
    pub fn motionless(self) -> Self {
        Self { omega_s: 0.0, ..self }
    }

    /// Same geometry with the heavier star's gravity switched off.
    pub fn without_companion(self) -> Self {
        Self { heavy_mass: 0.0, ..self }
    }

    /// Period of the binary, `2 pi / omega_s`. Infinite for motionless stars.
    pub fn stellar_period(&self) -> f64 {
        2.0 * core::f64::consts::PI / self.omega_s
    }

    pub fn star_position(&self, star: Star) -> Vec3 {
        match star {
            Star::Lighter => Vec3::new(self.x_light, 0.0, 0.0),
            Star::Heavier => Vec3::new(self.x_heavy, 0.0, 0.0),
        }
    }

    pub fn star_mass(&self, star: Star) -> f64 {
        match star {
            Star::Lighter => 1.0,
            Star::Heavier => self.heavy_mass,
        }
    }

    /// Rotating-frame x-coordinate of the plane at axial distance `w` from
    /// the lighter star, measured toward the heavier star.
    pub fn axial_x(&self, w: f64) -> f64 {
        self.x_light - w
    }

    /// Inertial-frame state of a star at time `t`.
    pub fn star_inertial(&self, star: Star, t: f64) -> PhaseState {
        let pos = self.star_position(star);
        let s = PhaseState::new(t, pos, Vec3::ZERO, Frame::Rotating);
        rotating_to_inertial(&s, self.omega_s).expect("rotating state")
    }
}

/// Position and velocity of the planet at scaled time `t`, tagged with the
/// frame they are expressed in.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PhaseState {
    pub t: f64,
    pub pos: Vec3,
    pub vel: Vec3,
    pub frame: Frame,
}

impl PhaseState {
    pub fn new(t: f64, pos: Vec3, vel: Vec3, frame: Frame) -> Self {
        Self { t, pos, vel, frame }
    }

    pub fn expect_frame(&self, expected: Frame) -> Result<()> {
        if self.frame == expected {
            Ok(())
        } else {
            Err(Error::FrameMismatch { expected, found: self.frame })
        }
    }

    pub(crate) fn to_array(self) -> [f64; 6] {
        [self.pos.x, self.pos.y, self.pos.z, self.vel.x, self.vel.y, self.vel.z]
    }

    pub(crate) fn from_array(t: f64, y: &[f64; 6], frame: Frame) -> Self {
        Self::new(t, Vec3::new(y[0], y[1], y[2]), Vec3::new(y[3], y[4], y[5]), frame)
    }
}

/// Rotating-frame state to the inertial frame: `r_i = R r`, `v_i = R (v + w x r)`
/// with `R` the rotation by `omega_s * t` about z.
pub fn rotating_to_inertial(s: &PhaseState, omega_s: f64) -> Result<PhaseState> {
    s.expect_frame(Frame::Rotating)?;
    let angle = omega_s * s.t;
    let spin = Vec3::Z * omega_s;
    Ok(PhaseState::new(s.t, s.pos.rotate_z(angle), (s.vel + spin.cross(s.pos)).rotate_z(angle), Frame::Inertial))
}

/// Inverse of [`rotating_to_inertial`].
pub fn inertial_to_rotating(s: &PhaseState, omega_s: f64) -> Result<PhaseState> {
    s.expect_frame(Frame::Inertial)?;
    let angle = -omega_s * s.t;
    let pos = s.pos.rotate_z(angle);
    let spin = Vec3::Z * omega_s;
    Ok(PhaseState::new(s.t, pos, s.vel.rotate_z(angle) - spin.cross(pos), Frame::Rotating))
}
