//! Sample grids in the `(w, b)` plane, one-period integrations and the
//! planar / nonplanar / unbound classification.
//!
//! Grid points are placed at fractions of the stability-boundary distance for
//! each mass ratio, so every point has a stable equilibrium orbit to start
//! from. Each orbit is integrated for one stellar period and classified:
//!
//! 1. positive energy relative to the initially closest star at the end of
//!    the run means the planet is unbound;
//! 2. the history of the axial angular momentum is recorded (sign changes and
//!    the smallest `|M/M(0)|`) but does not affect the verdict;
//! 3. otherwise the orbit is planar when, seen from the closest star in the
//!    non-rotating frame, it never strays more than 15 degrees from the plane
//!    orthogonal to the initial interstellar axis.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, IcConvention, IntegratorConfig, Trajectory};
use crate::equilibrium::{self, EquilibriumOrbit, Prerequisites};
use crate::roots::geometric_grid;
use crate::{Error, Result, Star, SystemConfig};

/// Largest excursion from the original plane, in degrees, for a planar orbit.
pub const PLANE_TOLERANCE_DEG: f64 = 15.0;

/// `|M/M(0)|` below this counts as the momentum having collapsed.
pub const M_COLLAPSE_RATIO: f64 = 0.01;

/// Mass ratios per sub-grid in the default survey.
pub const DEFAULT_B_COUNT: usize = 18;
pub const DEFAULT_B_RANGE: (f64, f64) = (1.0, 100.0);
/// Fractions of the stability-boundary distance used by the default survey.
pub const DEFAULT_FRACTION_RANGE: (f64, f64) = (0.05, 0.98);
pub const DEFAULT_LIGHTER_FRACTIONS: usize = 20;
pub const DEFAULT_HEAVIER_FRACTIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Planar,
    Nonplanar,
    Unbound,
}

impl Verdict {
    pub const ALL: [Verdict; 3] = [Verdict::Planar, Verdict::Nonplanar, Verdict::Unbound];

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Planar => "planar",
            Verdict::Nonplanar => "nonplanar",
            Verdict::Unbound => "unbound",
        }
    }
}

/// Mass ratios and boundary fractions for the points near one star.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GridSpec {
    pub star: Star,
    pub b_values: Vec<f64>,
    /// Fractions of the stability-boundary distance, each in `(0, 1)`.
    pub w_fractions: Vec<f64>,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.b_values.is_empty() || self.w_fractions.is_empty() {
            return Err(Error::Domain("grid needs at least one mass ratio and one fraction"));
        }
        if self.b_values.iter().any(|&b| !(b >= 1.0) || !b.is_finite()) {
            return Err(Error::Domain("mass ratios must be finite and at least 1"));
        }
        if self.w_fractions.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
            return Err(Error::Domain("boundary fractions must lie strictly between 0 and 1"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.b_values.len() * self.w_fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The 18 geometrically spaced mass ratios of the default survey.
pub fn default_b_values() -> Vec<f64> {
    geometric_grid(DEFAULT_B_RANGE.0, DEFAULT_B_RANGE.1, DEFAULT_B_COUNT).collect()
}

/// `n` geometrically spaced boundary fractions spanning the default range.
pub fn default_fractions(n: usize) -> Vec<f64> {
    geometric_grid(DEFAULT_FRACTION_RANGE.0, DEFAULT_FRACTION_RANGE.1, n).collect()
}

/// The 360-point lighter-star grid and the 180-point heavier-star grid.
pub fn default_grid() -> [GridSpec; 2] {
    [
        GridSpec {
            star: Star::Lighter,
            b_values: default_b_values(),
            w_fractions: default_fractions(DEFAULT_LIGHTER_FRACTIONS),
        },
        GridSpec {
            star: Star::Heavier,
            b_values: default_b_values(),
            w_fractions: default_fractions(DEFAULT_HEAVIER_FRACTIONS),
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GridPoint {
    pub star: Star,
    pub b: f64,
    pub w: f64,
    /// Distance from `star` as a fraction of the stability-boundary distance.
    pub fraction: f64,
}

impl GridPoint {
    /// Distance along the axis from the star the point belongs to.
    pub fn distance(&self) -> f64 {
        match self.star {
            Star::Lighter => self.w,
            Star::Heavier => 1.0 - self.w,
        }
    }
}

/// Place `fraction * d*(b)` from the star for every `(b, fraction)`, where
/// `d*(b)` is the stability-boundary distance.
pub fn build_grid(spec: &GridSpec) -> Result<Vec<GridPoint>> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.len());
    for &b in &spec.b_values {
        let extent = equilibrium::stability_extent(spec.star, b)?;
        for &fraction in &spec.w_fractions {
            let w = equilibrium::w_from_distance(spec.star, fraction * extent);
            points.push(GridPoint { star: spec.star, b, w, fraction });
        }
    }
    Ok(points)
}

/// Verdict and the evidence it was based on.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub max_plane_deviation_deg: f64,
    pub m_sign_changed: bool,
    pub min_abs_m_ratio: f64,
    /// Energy relative to the host star at the last sample.
    pub final_energy: f64,
    /// Time of the last sample.
    pub final_time: f64,
    pub aborted: bool,
}

impl ClassificationResult {
    /// `M` changed sign or collapsed below one percent of its start value.
    pub fn m_not_conserved(&self) -> bool {
        self.m_sign_changed || self.min_abs_m_ratio < M_COLLAPSE_RATIO
    }
}

/// Angle in degrees between the host-centric position and the plane that was
/// orthogonal to the interstellar axis at `t = 0`, in the non-rotating frame.
pub fn plane_deviation_deg(s: &crate::PhaseState, cfg: &SystemConfig, host: Star) -> f64 {
    let rel = s.pos - cfg.star_position(host);
    let norm = rel.norm();
    if norm == 0.0 {
        return 0.0;
    }
    // the initial axis is the inertial x direction, so only the x component
    // of the rotated offset matters
    let (sn, cs) = libm::sincos(cfg.omega_s * s.t);
    let along = cs * rel.x - sn * rel.y;
    libm::asin((along.abs() / norm).min(1.0)).to_degrees()
}

/// Apply the three classification steps to an integrated trajectory.
pub fn classify(traj: &Trajectory) -> Result<ClassificationResult> {
    let first = traj.samples.first().ok_or(Error::EmptyTrajectory)?;
    let last = traj.samples.last().ok_or(Error::EmptyTrajectory)?;
    let m0 = first.m;
    let mut sign_changed = false;
    let mut min_ratio = f64::INFINITY;
    let mut max_dev = 0.0f64;
    for s in &traj.samples {
        if s.m * m0 < 0.0 {
            sign_changed = true;
        }
        min_ratio = min_ratio.min((s.m / m0).abs());
        max_dev = max_dev.max(plane_deviation_deg(&s.state, &traj.cfg, traj.host));
    }
    let verdict = if last.e_star > 0.0 {
        Verdict::Unbound
    } else if max_dev <= PLANE_TOLERANCE_DEG {
        Verdict::Planar
    } else {
        Verdict::Nonplanar
    };
    Ok(ClassificationResult {
        verdict,
        max_plane_deviation_deg: max_dev,
        m_sign_changed: sign_changed,
        min_abs_m_ratio: min_ratio,
        final_energy: last.e_star,
        final_time: last.state.t,
        aborted: traj.aborted(),
    })
}

/// How survey orbits are started and integrated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SurveyConfig {
    pub integrator: IntegratorConfig,
    /// Starting angle of the planet around the axis.
    pub phase: f64,
    pub convention: IcConvention,
}

/// One row of survey output.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SurveyRow {
    pub point: GridPoint,
    pub phase: f64,
    pub orbit: Option<EquilibriumOrbit>,
    pub prereq: Prerequisites,
    pub classification: Option<ClassificationResult>,
    /// Largest relative change of the Jacobi constant over the run.
    pub jacobi_drift: Option<f64>,
    /// See [`Trajectory::torque_residual`].
    pub torque_residual: Option<f64>,
    /// Why the point could not be analysed or classified, if it could not.
    pub error: Option<Error>,
}

impl SurveyRow {
    pub fn verdict(&self) -> Option<Verdict> {
        self.classification.map(|c| c.verdict)
    }

    pub fn aborted(&self) -> bool {
        self.error.is_some() || self.classification.is_some_and(|c| c.aborted)
    }
}

/// Analyse, integrate and classify a single grid point. Failures are recorded
/// in the row.
pub fn evaluate_point(point: &GridPoint, cfg: &SurveyConfig) -> SurveyRow {
    let mut row = SurveyRow {
        point: *point,
        phase: cfg.phase,
        orbit: None,
        prereq: Prerequisites::default(),
        classification: None,
        jacobi_drift: None,
        torque_residual: None,
        error: None,
    };
    let outcome = (|| {
        let orbit = EquilibriumOrbit::analyze(point.w, point.b)?;
        row.orbit = Some(orbit);
        row.prereq = orbit.prereq;
        let sys = SystemConfig::new(point.b)?;
        let s0 = dynamics::initial_conditions(&orbit, &sys, cfg.phase, cfg.convention)?;
        let traj = dynamics::integrate(&s0, &sys, &cfg.integrator, sys.stellar_period())?;
        row.jacobi_drift = Some(traj.jacobi_drift());
        row.torque_residual = Some(traj.torque_residual());
        classify(&traj)
    })();
    match outcome {
        Ok(c) => row.classification = Some(c),
        Err(e) => row.error = Some(e),
    }
    row
}

/// Survey ordering: by `b`, then `w`, then star.
pub fn row_order(a: &SurveyRow, b: &SurveyRow) -> Ordering {
    a.point.b.total_cmp(&b.point.b).then(a.point.w.total_cmp(&b.point.w)).then(a.point.star.cmp(&b.point.star))
}

/// Evaluate every point of every grid, one after another.
pub fn run_survey(specs: &[GridSpec], cfg: &SurveyConfig) -> Result<Vec<SurveyRow>> {
    cfg.integrator.validate()?;
    let mut rows = Vec::new();
    for spec in specs {
        for p in build_grid(spec)? {
            rows.push(evaluate_point(&p, cfg));
        }
    }
    rows.sort_by(row_order);
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct VerdictCounts {
    pub planar: usize,
    pub nonplanar: usize,
    pub unbound: usize,
    /// Points that failed before a verdict could be reached.
    pub unclassified: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Option<Verdict>) {
        match v {
            Some(Verdict::Planar) => self.planar += 1,
            Some(Verdict::Nonplanar) => self.nonplanar += 1,
            Some(Verdict::Unbound) => self.unbound += 1,
            None => self.unclassified += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.planar + self.nonplanar + self.unbound + self.unclassified
    }
}

/// Scatter-plot entry for the lighter- or heavier-star figure.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FigurePoint {
    pub b: f64,
    pub w: f64,
    pub distance: f64,
    pub all_prerequisites: bool,
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SurveySummary {
    pub total: usize,
    pub verdicts: VerdictCounts,
    /// Keyed by the exists / stable / fast / small-perturbation flags as a
    /// string of 0s and 1s in that order.
    pub by_prerequisites: BTreeMap<String, VerdictCounts>,
    pub all_prerequisites: VerdictCounts,
    /// Planar share of the points meeting all four prerequisites; `None`
    /// when there are no such points.
    pub planar_fraction_all_prerequisites: Option<f64>,
    pub aborted: usize,
    /// Bound orbits whose axial momentum neither changed sign nor collapsed.
    pub bound_with_m_conserved: usize,
    pub lighter: Vec<FigurePoint>,
    pub heavier: Vec<FigurePoint>,
}

fn prereq_key(p: &Prerequisites) -> String {
    [p.exists, p.stable, p.fast, p.small_perturbation].iter().map(|&f| if f { '1' } else { '0' }).collect()
}

pub fn summarize(rows: &[SurveyRow]) -> SurveySummary {
    let mut s = SurveySummary {
        total: rows.len(),
        verdicts: VerdictCounts::default(),
        by_prerequisites: BTreeMap::new(),
        all_prerequisites: VerdictCounts::default(),
        planar_fraction_all_prerequisites: None,
        aborted: 0,
        bound_with_m_conserved: 0,
        lighter: Vec::new(),
        heavier: Vec::new(),
    };
    for row in rows {
        let v = row.verdict();
        s.verdicts.add(v);
        s.by_prerequisites.entry(prereq_key(&row.prereq)).or_default().add(v);
        if row.prereq.all() {
            s.all_prerequisites.add(v);
        }
        if row.aborted() {
            s.aborted += 1;
        }
        if let Some(c) = row.classification {
            if c.verdict != Verdict::Unbound && !c.m_not_conserved() {
                s.bound_with_m_conserved += 1;
            }
        }
        let fp = FigurePoint {
            b: row.point.b,
            w: row.point.w,
            distance: row.point.distance(),
            all_prerequisites: row.prereq.all(),
            verdict: v,
        };
        match row.point.star {
            Star::Lighter => s.lighter.push(fp),
            Star::Heavier => s.heavier.push(fp),
        }
    }
    let n = s.all_prerequisites.total();
    if n > 0 {
        s.planar_fraction_all_prerequisites = Some(s.all_prerequisites.planar as f64 / n as f64);
    }
    s
}
