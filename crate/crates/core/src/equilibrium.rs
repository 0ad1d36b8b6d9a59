//! Circular orbits around the interstellar axis when both stars are held
//! motionless.
//!
//! In cylindrical coordinates about the axis, `w` is the axial distance of the
//! orbit plane from the lighter star (toward the heavier one) and `v` is the
//! distance from the axis. The axial angular momentum `M` is conserved for
//! motionless stars, and the motion in the `(w, v)` half-plane is governed by
//!
//! ```text
//! U(w, v) = -1/r1 - b/r2 + M^2 / (2 v^2),   r1 = |(w, v)|,  r2 = |(1 - w, v)|.
//! ```
//!
//! A circular orbit sits at a critical point of `U`; it is stable when the
//! Hessian there is positive definite.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::roots::{bisect, bisect_predicate, first_sign_change, geometric_grid};
use crate::{kepler_frequency, Error, Result, Star};

/// Radius bracket searched for the equilibrium orbit.
pub const RADIUS_BRACKET: (f64, f64) = (1e-6, 10.0);
/// Number of geometric sample radii used to find a sign change of the axial
/// force before bisecting.
pub const RADIUS_SCAN_POINTS: usize = 10_000;
/// Minimum planetary-to-stellar frequency ratio for the fast-orbit condition.
pub const FREQUENCY_RATIO_THRESHOLD: f64 = 10.0;
/// Largest radial perturbation, as a fraction of the radius, that still counts
/// as small.
pub const PERTURBATION_LIMIT: f64 = 0.5;
/// Below this eigenvalue gap the amplitude formula is treated as singular.
pub const DEGENERATE_GAP: f64 = 1e-12;

fn check_plane(w: f64, b: f64) -> Result<()> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::Domain("axial position w must lie in (0, 1)"));
    }
    if !(b >= 1.0) || !b.is_finite() {
        return Err(Error::Domain("mass ratio b must be finite and >= 1"));
    }
    Ok(())
}

fn is_degenerate(w: f64, b: f64) -> bool {
    w == 0.5 && b == 1.0
}

#[inline]
fn inv_cube(r2: f64) -> f64 {
    1.0 / (r2 * libm::sqrt(r2))
}

/// Net axial acceleration toward the lighter star on a ring of radius `v` at
/// axial position `w`:
/// `w / r1^3 - b (1 - w) / r2^3`. Zero at the equilibrium radius.
pub fn axial_residual(w: f64, b: f64, v: f64) -> Result<f64> {
    check_plane(w, b)?;
    if !(v > 0.0) {
        return Err(Error::Domain("radius v must be positive"));
    }
    Ok(axial_force(w, b, v))
}

fn axial_force(w: f64, b: f64, v: f64) -> f64 {
    let u = 1.0 - w;
    w * inv_cube(w * w + v * v) - b * u * inv_cube(u * u + v * v)
}

/// Radius of the circular orbit around the axis at `(w, b)`.
///
/// Scans the radius bracket for the first sign change of the axial force and
/// bisects it to the limit of double precision.
pub fn solve_equilibrium_radius(w: f64, b: f64) -> Result<f64> {
    check_plane(w, b)?;
    if is_degenerate(w, b) {
        return Err(Error::DegenerateEquilibrium);
    }
    let (lo, hi) = RADIUS_BRACKET;
    let force = |v: f64| axial_force(w, b, v);
    let (a, c) =
        first_sign_change(force, geometric_grid(lo, hi, RADIUS_SCAN_POINTS)).ok_or(Error::NoEquilibrium { w, b })?;
    Ok(bisect(force, a, c, 0.0))
}

/// Angular frequency of the circular orbit from radial force balance,
/// `f_p^2 = 1/r1^3 + b/r2^3`.
pub fn orbit_frequency(w: f64, b: f64, v0: f64) -> Result<f64> {
    check_plane(w, b)?;
    if !(v0 > 0.0) {
        return Err(Error::Domain("equilibrium radius must be positive"));
    }
    let u = 1.0 - w;
    Ok(libm::sqrt(inv_cube(w * w + v0 * v0) + b * inv_cube(u * u + v0 * v0)))
}

fn check_point(w_pt: f64, v_pt: f64) -> Result<()> {
    if !(v_pt > 0.0) {
        return Err(Error::Singularity("effective potential is singular on the axis"));
    }
    if !w_pt.is_finite() || !v_pt.is_finite() {
        return Err(Error::Domain("non-finite evaluation point"));
    }
    Ok(())
}

/// Effective potential for motionless stars at axial momentum `m`.
pub fn effective_potential(w_pt: f64, v_pt: f64, b: f64, m: f64) -> Result<f64> {
    check_point(w_pt, v_pt)?;
    let u = 1.0 - w_pt;
    let r1 = libm::hypot(w_pt, v_pt);
    let r2 = libm::hypot(u, v_pt);
    Ok(-1.0 / r1 - b / r2 + m * m / (2.0 * v_pt * v_pt))
}

/// `(dU/dw, dU/dv)`.
pub fn potential_gradient(w_pt: f64, v_pt: f64, b: f64, m: f64) -> Result<[f64; 2]> {
    check_point(w_pt, v_pt)?;
    let u = 1.0 - w_pt;
    let v2 = v_pt * v_pt;
    let k1 = inv_cube(w_pt * w_pt + v2);
    let k2 = inv_cube(u * u + v2);
    Ok([w_pt * k1 - b * u * k2, v_pt * k1 + b * v_pt * k2 - m * m / (v2 * v_pt)])
}

/// Symmetric 2x2 matrix in `(w, v)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Hessian {
    pub ww: f64,
    pub wv: f64,
    pub vv: f64,
}

impl Hessian {
    pub fn max_abs_diff(&self, other: &Hessian) -> f64 {
        (self.ww - other.ww).abs().max((self.wv - other.wv).abs()).max((self.vv - other.vv).abs())
    }
}

/// Closed-form second partials of the effective potential.
pub fn potential_hessian(w_pt: f64, v_pt: f64, b: f64, m: f64) -> Result<Hessian> {
    check_point(w_pt, v_pt)?;
    let u = 1.0 - w_pt;
    let v2 = v_pt * v_pt;
    let s1 = w_pt * w_pt + v2;
    let s2 = u * u + v2;
    let k1 = inv_cube(s1);
    let k2 = inv_cube(s2);
    let q1 = k1 / s1;
    let q2 = k2 / s2;
    Ok(Hessian {
        ww: k1 - 3.0 * w_pt * w_pt * q1 + b * (k2 - 3.0 * u * u * q2),
        wv: -3.0 * w_pt * v_pt * q1 + 3.0 * b * u * v_pt * q2,
        vv: k1 - 3.0 * v2 * q1 + b * (k2 - 3.0 * v2 * q2) + 3.0 * m * m / (v2 * v2),
    })
}

/// Eigenstructure of the harmonic well around the equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Oscillator {
    /// Larger Hessian eigenvalue.
    pub lambda_plus: f64,
    /// Smaller Hessian eigenvalue.
    pub lambda_minus: f64,
    /// Principal-axis angle in `[0, pi/2)`, measured from the `w` direction.
    pub alpha_axis: f64,
    /// Whether `alpha_axis` points along the `lambda_plus` eigenvector (the
    /// other axis otherwise, after reduction into `[0, pi/2)`).
    pub axis_is_plus: bool,
}

impl Oscillator {
    pub fn from_hessian(h: &Hessian) -> Self {
        let mean = 0.5 * (h.ww + h.vv);
        let radius = libm::hypot(0.5 * (h.ww - h.vv), h.wv);
        // angle of the lambda_plus eigenvector, in (-pi/2, pi/2]
        let theta = 0.5 * libm::atan2(2.0 * h.wv, h.ww - h.vv);
        let (alpha_axis, axis_is_plus) = if theta < 0.0 {
            (theta + FRAC_PI_2, false)
        } else if theta >= FRAC_PI_2 {
            (theta - FRAC_PI_2, false)
        } else {
            (theta, true)
        };
        Self { lambda_plus: mean + radius, lambda_minus: mean - radius, alpha_axis, axis_is_plus }
    }

    pub fn stable(&self) -> bool {
        self.lambda_minus > 0.0
    }

    /// `omega_+ = sqrt(lambda_+)`; zero when the eigenvalue is not positive.
    pub fn omega_plus(&self) -> f64 {
        libm::sqrt(self.lambda_plus.max(0.0))
    }

    pub fn omega_minus(&self) -> f64 {
        libm::sqrt(self.lambda_minus.max(0.0))
    }

    /// Rebuild the Hessian as `R(alpha) diag(l_along, l_across) R(alpha)^T`.
    pub fn reconstruct(&self) -> Hessian {
        let (along, across) = if self.axis_is_plus {
            (self.lambda_plus, self.lambda_minus)
        } else {
            (self.lambda_minus, self.lambda_plus)
        };
        let (s, c) = libm::sincos(self.alpha_axis);
        Hessian { ww: c * c * along + s * s * across, wv: s * c * (along - across), vv: s * s * along + c * c * across }
    }
}

/// Oscillator around the equilibrium at `(w, b)`, with `M` fixed at `f_p v0^2`.
pub fn oscillator_eigensystem(w: f64, b: f64) -> Result<Oscillator> {
    let v0 = solve_equilibrium_radius(w, b)?;
    let f_p = orbit_frequency(w, b, v0)?;
    let h = potential_hessian(w, v0, b, f_p * v0 * v0)?;
    Ok(Oscillator::from_hessian(&h))
}

/// Signed amplitudes of the axial and radial responses to the Coriolis drive.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Amplitudes {
    pub delta_w: f64,
    pub delta_v: f64,
}

/// `4 omega_s f_p v0 / (omega_+^2 - omega_-^2) * (cos 2a, sin 2a)`.
pub fn perturbation_amplitudes(
    omega_s: f64,
    f_p: f64,
    v0: f64,
    omega_plus: f64,
    omega_minus: f64,
    alpha: f64,
) -> Result<Amplitudes> {
    amplitudes_from_gap(omega_s, f_p, v0, omega_plus * omega_plus - omega_minus * omega_minus, alpha)
}

fn amplitudes_from_gap(omega_s: f64, f_p: f64, v0: f64, gap: f64, alpha: f64) -> Result<Amplitudes> {
    if gap.abs() < DEGENERATE_GAP {
        return Err(Error::DegenerateOscillator);
    }
    let scale = 4.0 * omega_s * f_p * v0 / gap;
    let (s, c) = libm::sincos(2.0 * alpha);
    Ok(Amplitudes { delta_w: scale * c, delta_v: scale * s })
}

/// The four conditions under which a rotating-binary orbit was argued to
/// track the interstellar axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Prerequisites {
    pub exists: bool,
    pub stable: bool,
    pub fast: bool,
    pub small_perturbation: bool,
}

impl Prerequisites {
    pub fn all(&self) -> bool {
        self.exists && self.stable && self.fast && self.small_perturbation
    }
}

/// Fully characterised circular orbit around the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EquilibriumOrbit {
    pub w: f64,
    pub b: f64,
    pub v0: f64,
    pub f_p: f64,
    pub omega_s: f64,
    pub freq_ratio: f64,
    pub m0: f64,
    /// Axial force left at the solved radius.
    pub residual: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub alpha_axis: f64,
    pub axis_is_plus: bool,
    pub delta_w_amp: Option<f64>,
    pub delta_v_amp: Option<f64>,
    pub prereq: Prerequisites,
}

impl EquilibriumOrbit {
    /// Solve, characterise and flag the orbit at `(w, b)`.
    ///
    /// Fails with [`Error::NoEquilibrium`] when no circular orbit exists and
    /// with [`Error::DegenerateEquilibrium`] at the equal-mass midpoint.
    pub fn analyze(w: f64, b: f64) -> Result<Self> {
        let omega_s = kepler_frequency(b)?;
        let v0 = solve_equilibrium_radius(w, b)?;
        let f_p = orbit_frequency(w, b, v0)?;
        let m0 = f_p * v0 * v0;
        let osc = Oscillator::from_hessian(&potential_hessian(w, v0, b, m0)?);
        let stable = osc.stable();
        let amps = if stable {
            amplitudes_from_gap(omega_s, f_p, v0, osc.lambda_plus - osc.lambda_minus, osc.alpha_axis).ok()
        } else {
            None
        };
        let freq_ratio = f_p / omega_s;
        let prereq = Prerequisites {
            exists: true,
            stable,
            fast: freq_ratio >= FREQUENCY_RATIO_THRESHOLD,
            small_perturbation: amps.is_some_and(|a| a.delta_v.abs() <= PERTURBATION_LIMIT * v0),
        };
        Ok(Self {
            w,
            b,
            v0,
            f_p,
            omega_s,
            freq_ratio,
            m0,
            residual: axial_force(w, b, v0),
            lambda_plus: osc.lambda_plus,
            lambda_minus: osc.lambda_minus,
            omega_plus: osc.omega_plus(),
            omega_minus: osc.omega_minus(),
            alpha_axis: osc.alpha_axis,
            axis_is_plus: osc.axis_is_plus,
            delta_w_amp: amps.map(|a| a.delta_w),
            delta_v_amp: amps.map(|a| a.delta_v),
            prereq,
        })
    }

    pub fn oscillator(&self) -> Oscillator {
        Oscillator {
            lambda_plus: self.lambda_plus,
            lambda_minus: self.lambda_minus,
            alpha_axis: self.alpha_axis,
            axis_is_plus: self.axis_is_plus,
        }
    }

    /// Perturbation amplitudes for this orbit; fails for unstable or degenerate
    /// oscillators.
    pub fn perturbation_amplitudes(&self) -> Result<Amplitudes> {
        if !self.prereq.stable {
            return Err(Error::Domain("amplitudes need a stable equilibrium"));
        }
        amplitudes_from_gap(self.omega_s, self.f_p, self.v0, self.lambda_plus - self.lambda_minus, self.alpha_axis)
    }
}

/// Prerequisite flags at `(w, b)` together with the orbit when one exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assessment {
    pub prereq: Prerequisites,
    pub orbit: Option<EquilibriumOrbit>,
}

/// Evaluate the four prerequisites. A missing orbit is reported through
/// `exists = false`; the degenerate midpoint is an error.
pub fn prerequisites(w: f64, b: f64) -> Result<Assessment> {
    match EquilibriumOrbit::analyze(w, b) {
        Ok(orbit) => Ok(Assessment { prereq: orbit.prereq, orbit: Some(orbit) }),
        Err(Error::NoEquilibrium { .. }) => Ok(Assessment { prereq: Prerequisites::default(), orbit: None }),
        Err(e) => Err(e),
    }
}

/// Which region boundary to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundaryKind {
    /// Edge of the region with a stable circular orbit.
    Stability,
    /// Where `f_p / omega_s` reaches the fast-orbit threshold.
    #[cfg_attr(feature = "serde", serde(rename = "frequency"))]
    FrequencyRatio,
    /// Where the radial perturbation reaches half the radius.
    Perturbation,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 3] =
        [BoundaryKind::Stability, BoundaryKind::FrequencyRatio, BoundaryKind::Perturbation];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Stability => "stability",
            BoundaryKind::FrequencyRatio => "frequency",
            BoundaryKind::Perturbation => "perturbation",
        }
    }
}

/// Convert a distance from `star` into the axial coordinate `w`.
pub fn w_from_distance(star: Star, distance: f64) -> f64 {
    match star {
        Star::Lighter => distance,
        Star::Heavier => 1.0 - distance,
    }
}

/// Region predicate at distance `d` from `star`.
pub fn region_predicate(kind: BoundaryKind, star: Star, b: f64, d: f64) -> bool {
    let w = w_from_distance(star, d);
    let Ok(orbit) = EquilibriumOrbit::analyze(w, b) else {
        return false;
    };
    let p = orbit.prereq;
    match kind {
        BoundaryKind::Stability => p.stable,
        BoundaryKind::FrequencyRatio => p.fast,
        BoundaryKind::Perturbation => p.stable && p.small_perturbation,
    }
}

/// Distance scan used to bracket boundary crossings: geometric close to the
/// star, uniform further out, stopping just short of the midpoint.
pub fn boundary_scan_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = geometric_grid(1e-6, 0.02, 80).collect();
    grid.pop();
    grid.extend((0..=96).map(|i| 0.02 + i as f64 * 0.005).filter(|d| *d < 0.5));
    grid.push(0.5 - 1e-6);
    grid
}

/// Crossings located when tracing one boundary at a fixed mass ratio.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoundaryTrace {
    pub kind: BoundaryKind,
    pub star: Star,
    pub b: f64,
    /// Predicate value closest to the star.
    pub holds_near_star: bool,
    /// Every predicate transition, as a distance from `star`, outward.
    pub crossings: Vec<f64>,
}

impl BoundaryTrace {
    /// Innermost crossing, the curve drawn in the figures.
    pub fn boundary(&self) -> f64 {
        self.crossings[0]
    }
}

/// Bisection tolerance on boundary distances.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Locate every transition of the `kind` predicate on `(0, 1/2)`, measured as
/// a distance from `star`.
pub fn locate_boundary(kind: BoundaryKind, star: Star, b: f64) -> Result<BoundaryTrace> {
    kepler_frequency(b)?;
    let pred = |d: f64| region_predicate(kind, star, b, d);
    let grid = boundary_scan_grid();
    let values: Vec<bool> = grid.iter().map(|&d| pred(d)).collect();
    let crossings: Vec<f64> = grid
        .windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| v[0] != v[1])
        .map(|(d, _)| bisect_predicate(pred, d[0], d[1], BOUNDARY_TOL))
        .collect();
    if crossings.is_empty() {
        return Err(Error::NoCrossing { b, holds: values[0] });
    }
    Ok(BoundaryTrace { kind, star, b, holds_near_star: values[0], crossings })
}

/// One polyline vertex; `distance` is `None` where the predicate never changes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BoundaryPoint {
    pub b: f64,
    pub distance: Option<f64>,
}

/// Trace a boundary over several mass ratios.
pub fn trace_boundary(kind: BoundaryKind, star: Star, b_values: &[f64]) -> Result<Vec<BoundaryPoint>> {
    if b_values.is_empty() {
        return Err(Error::Domain("no mass ratios to trace"));
    }
    b_values
        .iter()
        .map(|&b| match locate_boundary(kind, star, b) {
            Ok(trace) => Ok(BoundaryPoint { b, distance: Some(trace.boundary()) }),
            Err(Error::NoCrossing { .. }) => Ok(BoundaryPoint { b, distance: None }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Outer edge of the stable region around `star`.
///
/// Where stability holds all the way to the midpoint (equal masses) the
/// midpoint itself is returned.
pub fn stability_extent(star: Star, b: f64) -> Result<f64> {
    match locate_boundary(BoundaryKind::Stability, star, b) {
        Ok(trace) if trace.holds_near_star => Ok(trace.boundary()),
        Ok(_) => Err(Error::Domain("orbits next to the star are unstable")),
        Err(Error::NoCrossing { holds: true, .. }) => Ok(0.5),
        Err(e) => Err(e),
    }
}
