//! Axial angular momentum and the torques that change it in the rotating
//! frame, for both integrated states and the tilted-circle model
//!
//! ```text
//! x(t) = x1(t) + rho sin(alpha(t)) cos(f t)
//! y(t) = rho cos(alpha(t)) cos(f t)
//! z(t) = rho sin(f t)
//! ```
//!
//! Gravity from stars on the x-axis exerts no torque about that axis, so the
//! axial momentum `M = y z' - z y'` changes only through the Coriolis torque
//! `2 w z x'` and the centrifugal torque `-w^2 y z`. The only tilt law that
//! keeps this balance for all `t` rotates the orbit with the binary,
//! `alpha(t) = w t + alpha0`, and along it `M(t)` swings sinusoidally with the
//! stellar period.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Frame, PhaseState, Result, Vec3};

/// `M = y v_z - z v_y`.
pub fn axial_angular_momentum(s: &PhaseState) -> f64 {
    s.pos.y * s.vel.z - s.pos.z * s.vel.y
}

/// `T1 = 2 w z v_x`.
pub fn coriolis_torque(s: &PhaseState, omega: f64) -> f64 {
    2.0 * omega * s.pos.z * s.vel.x
}

/// `T2 = -w^2 y z`.
pub fn centrifugal_torque(s: &PhaseState, omega: f64) -> f64 {
    -omega * omega * s.pos.y * s.pos.z
}

/// Radius, frequency and stellar rate of the tilted circle, plus the
/// constants of the co-rotating solution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AnsatzParams {
    pub rho: f64,
    pub f: f64,
    pub omega: f64,
    pub alpha0: f64,
    pub x0: f64,
}

impl AnsatzParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !(self.f > 0.0) || !(self.omega >= 0.0) {
            return Err(Error::Domain("need rho > 0, f > 0 and omega >= 0"));
        }
        if !self.alpha0.is_finite() || !self.x0.is_finite() {
            return Err(Error::Domain("alpha0 and x0 must be finite"));
        }
        Ok(())
    }
}

/// Step for finite-differenced tilt accelerations.
pub const TILT_FD_STEP: f64 = 1e-6;

/// Time dependence of the tilt angle and of the orbit center.
pub trait TiltLaw {
    fn alpha(&self, t: f64) -> f64;
    fn alpha_dot(&self, t: f64) -> f64;
    /// Exact second derivative when the law knows it.
    fn alpha_ddot(&self, _t: f64) -> Option<f64> {
        None
    }
    fn x1(&self, t: f64) -> f64;
    fn x1_dot(&self, t: f64) -> f64;

    /// `alpha''`, central-differenced from `alpha'` when not supplied.
    fn alpha_ddot_or_fd(&self, t: f64) -> f64 {
        self.alpha_ddot(t).unwrap_or_else(|| {
            let h = TILT_FD_STEP;
            (self.alpha_dot(t + h) - self.alpha_dot(t - h)) / (2.0 * h)
        })
    }
}

/// `alpha(t) = alpha0 + rate t`, `x1(t) = x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LinearTilt {
    pub alpha0: f64,
    pub rate: f64,
    pub x0: f64,
}

impl LinearTilt {
    /// A fixed tilt, as assumed when the orbit plane is held orthogonal to
    /// the axis (`alpha = 0`).
    pub fn constant(alpha: f64, x0: f64) -> Self {
        Self { alpha0: alpha, rate: 0.0, x0 }
    }
}

impl TiltLaw for LinearTilt {
    fn alpha(&self, t: f64) -> f64 {
        self.alpha0 + self.rate * t
    }
    fn alpha_dot(&self, _t: f64) -> f64 {
        self.rate
    }
    fn alpha_ddot(&self, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn x1(&self, _t: f64) -> f64 {
        self.x0
    }
    fn x1_dot(&self, _t: f64) -> f64 {
        0.0
    }
}

/// The tilt law that satisfies the torque balance: the orbit plane turns with
/// the binary and its center stays put.
pub fn analytic_solution(alpha0: f64, omega: f64, x0: f64) -> LinearTilt {
    LinearTilt { alpha0, rate: omega, x0 }
}

/// Cubic tilt and center laws, coefficients in ascending powers of `t`.
/// Only first derivatives are supplied, so `alpha''` is finite-differenced.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PolynomialTilt {
    pub alpha: [f64; 4],
    pub x1: [f64; 4],
}

fn poly(c: &[f64; 4], t: f64) -> f64 {
    ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
}

fn poly_dot(c: &[f64; 4], t: f64) -> f64 {
    (3.0 * c[3] * t + 2.0 * c[2]) * t + c[1]
}

impl TiltLaw for PolynomialTilt {
    fn alpha(&self, t: f64) -> f64 {
        poly(&self.alpha, t)
    }
    fn alpha_dot(&self, t: f64) -> f64 {
        poly_dot(&self.alpha, t)
    }
    fn x1(&self, t: f64) -> f64 {
        poly(&self.x1, t)
    }
    fn x1_dot(&self, t: f64) -> f64 {
        poly_dot(&self.x1, t)
    }
}

/// Rotating-frame state on the tilted circle; the velocity is the exact time
/// derivative of the position.
pub fn ansatz_state<L: TiltLaw + ?Sized>(p: &AnsatzParams, law: &L, t: f64) -> PhaseState {
    let (sa, ca) = libm::sincos(law.alpha(t));
    let (sf, cf) = libm::sincos(p.f * t);
    let ad = law.alpha_dot(t);
    let pos = Vec3::new(law.x1(t) + p.rho * sa * cf, p.rho * ca * cf, p.rho * sf);
    let vel = Vec3::new(
        law.x1_dot(t) + p.rho * (ca * ad * cf - p.f * sa * sf),
        -p.rho * (sa * ad * cf + p.f * ca * sf),
        p.rho * p.f * cf,
    );
    PhaseState::new(t, pos, vel, Frame::Rotating)
}

/// Closed form of `M(t)` on the tilted circle:
/// `1/2 rho^2 sin(2ft) sin(alpha) alpha' + f rho^2 cos(alpha)`.
pub fn ansatz_m<L: TiltLaw + ?Sized>(p: &AnsatzParams, law: &L, t: f64) -> f64 {
    let (sa, ca) = libm::sincos(law.alpha(t));
    let r2 = p.rho * p.rho;
    0.5 * r2 * libm::sin(2.0 * p.f * t) * sa * law.alpha_dot(t) + p.f * r2 * ca
}

/// Closed forms of the Coriolis and centrifugal torques on the tilted circle.
pub fn ansatz_torques<L: TiltLaw + ?Sized>(p: &AnsatzParams, law: &L, t: f64) -> (f64, f64) {
    let (sa, ca) = libm::sincos(law.alpha(t));
    let (s2, c2) = libm::sincos(2.0 * p.f * t);
    let sf = libm::sin(p.f * t);
    let (rho, f, w) = (p.rho, p.f, p.omega);
    let r2 = rho * rho;
    let t1 = r2 * w * s2 * ca * law.alpha_dot(t) + f * r2 * w * c2 * sa
        - rho * w * (f * rho * sa - 2.0 * sf * law.x1_dot(t));
    let t2 = -0.5 * r2 * w * w * s2 * ca;
    (t1, t2)
}

/// Time derivative of [`ansatz_m`].
pub fn ansatz_m_dot<L: TiltLaw + ?Sized>(p: &AnsatzParams, law: &L, t: f64) -> f64 {
    let (sa, ca) = libm::sincos(law.alpha(t));
    let (s2, c2) = libm::sincos(2.0 * p.f * t);
    let ad = law.alpha_dot(t);
    let add = law.alpha_ddot_or_fd(t);
    let r2 = p.rho * p.rho;
    0.5 * r2 * s2 * (sa * add + ca * ad * ad) + p.f * r2 * sa * ad * (c2 - 1.0)
}

/// `M'(t) - T1(t) - T2(t)`; zero for every `t` exactly when the law is
/// consistent with the torques.
pub fn balance_residual<L: TiltLaw + ?Sized>(p: &AnsatzParams, law: &L, t: f64) -> f64 {
    let (t1, t2) = ansatz_torques(p, law, t);
    ansatz_m_dot(p, law, t) - t1 - t2
}

/// Left-hand sides of the three conditions obtained by zeroing the
/// `sin(2ft)`, `cos(2ft)` and `sin(ft)` coefficient groups of the balance:
///
/// ```text
/// alpha'' sin(alpha) + cos(alpha) (w - alpha')^2
/// sin(alpha) (w - alpha')
/// x1'
/// ```
pub fn residual_system<L: TiltLaw + ?Sized>(law: &L, omega: f64, t: f64) -> [f64; 3] {
    let (sa, ca) = libm::sincos(law.alpha(t));
    let lag = omega - law.alpha_dot(t);
    [law.alpha_ddot_or_fd(t) * sa + ca * lag * lag, sa * lag, law.x1_dot(t)]
}

/// `M(t)` along the co-rotating solution:
/// `f rho^2 cos(w t + alpha0) + 1/2 rho^2 w sin(2ft) sin(w t + alpha0)`.
pub fn solution_m(p: &AnsatzParams, t: f64) -> f64 {
    let (sa, ca) = libm::sincos(p.omega * t + p.alpha0);
    let r2 = p.rho * p.rho;
    p.f * r2 * ca + 0.5 * r2 * p.omega * libm::sin(2.0 * p.f * t) * sa
}

/// Ratio of the fast ripple to the dominant sinusoid in [`solution_m`],
/// `w / (2 f)`.
pub fn ripple_ratio(p: &AnsatzParams) -> f64 {
    p.omega / (2.0 * p.f)
}

/// Torque-balance residuals along sampled rotating-frame states.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BalanceScan {
    /// Sample times at which the residual was evaluated.
    pub times: Vec<f64>,
    /// `dM/dt - T1 - T2` at each of those times.
    pub residuals: Vec<f64>,
    pub max_abs: f64,
    pub t_of_max: f64,
}

/// Compare the numerical derivative of `M` along uniformly spaced samples
/// with the Coriolis and centrifugal torques at the same instants.
///
/// `dM/dt` uses the fourth-order central stencil, so the two samples at each
/// end are skipped.
pub fn balance_scan(samples: &[PhaseState], omega: f64) -> Result<BalanceScan> {
    if samples.len() < 5 {
        return Err(Error::Domain("balance scan needs at least five samples"));
    }
    if samples.iter().any(|s| s.frame != Frame::Rotating) {
        return Err(Error::FrameMismatch { expected: Frame::Rotating, found: Frame::Inertial });
    }
    let n = samples.len();
    let h = (samples[n - 1].t - samples[0].t) / (n - 1) as f64;
    let uniform = samples.windows(2).all(|w| ((w[1].t - w[0].t) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if !uniform || h == 0.0 {
        return Err(Error::Domain("balance scan needs uniformly spaced samples"));
    }
    let m: Vec<f64> = samples.iter().map(axial_angular_momentum).collect();
    let mut scan = BalanceScan {
        times: Vec::with_capacity(n - 4),
        residuals: Vec::with_capacity(n - 4),
        max_abs: 0.0,
        t_of_max: samples[2].t,
    };
    for i in 2..n - 2 {
        let dm = (m[i - 2] - 8.0 * m[i - 1] + 8.0 * m[i + 1] - m[i + 2]) / (12.0 * h);
        let s = &samples[i];
        let r = dm - coriolis_torque(s, omega) - centrifugal_torque(s, omega);
        if r.abs() > scan.max_abs {
            scan.max_abs = r.abs();
            scan.t_of_max = s.t;
        }
        scan.times.push(s.t);
        scan.residuals.push(r);
    }
    Ok(scan)
}
