//! JSON documents written by the command-line tool. Their shapes are pinned by
//! the schemas under `schemas/`.

use serde::Serialize;

use polar_core::dynamics::{IcConvention, IntegratorConfig, Trajectory};
use polar_core::equilibrium::EquilibriumOrbit;
use polar_core::survey::{ClassificationResult, SurveySummary};
use polar_core::torque::AnsatzParams;
use polar_core::{Error, Frame, Star};

/// Written to stderr when a command fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepStats {
    pub evaluations: usize,
    pub accepted: usize,
    pub rejected: usize,
}

/// `classification.json` from `integrate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrateReport {
    pub w: f64,
    pub b: f64,
    pub host: Star,
    pub phase: f64,
    pub ic_convention: IcConvention,
    pub periods: f64,
    pub frame: Frame,
    pub orbit: EquilibriumOrbit,
    /// Missing only when the classifier itself failed.
    pub classification: Option<ClassificationResult>,
    pub aborted: bool,
    pub failure: Option<String>,
    pub samples: usize,
    pub jacobi_drift: f64,
    pub torque_residual: f64,
    pub steps: StepStats,
}

impl IntegrateReport {
    pub fn new(
        orbit: EquilibriumOrbit,
        traj: &Trajectory,
        classification: Option<ClassificationResult>,
        phase: f64,
        ic_convention: IcConvention,
        periods: f64,
        frame: Frame,
    ) -> Self {
        Self {
            w: orbit.w,
            b: orbit.b,
            host: traj.host,
            phase,
            ic_convention,
            periods,
            frame,
            orbit,
            classification,
            aborted: traj.aborted(),
            failure: traj.failure.map(|e| e.to_string()),
            samples: traj.samples.len(),
            jacobi_drift: traj.jacobi_drift(),
            torque_residual: traj.torque_residual(),
            steps: StepStats {
                evaluations: traj.stats.evaluations,
                accepted: traj.stats.accepted,
                rejected: traj.stats.rejected,
            },
        }
    }
}

/// `torque_check.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorqueCheckReport {
    pub input: String,
    /// Absent when only the frame rate was given.
    pub b: Option<f64>,
    pub omega: f64,
    pub samples: usize,
    pub evaluated: usize,
    pub max_abs_residual: f64,
    pub t_of_max: f64,
    /// Largest `|T1 + T2|` along the samples, for scale.
    pub max_abs_torque: f64,
}

/// Results of the seeded random identity checks run by `ansatz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomChecks {
    pub seed: u64,
    pub draws: usize,
    pub max_m_error: f64,
    pub max_torque_error: f64,
    pub max_solution_residual: f64,
    pub max_solution_m_error: f64,
}

/// `ansatz_summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnsatzReport {
    pub params: AnsatzParams,
    pub samples: usize,
    pub span: f64,
    pub max_abs_residual: f64,
    pub max_abs_m_difference: f64,
    pub ripple_ratio: f64,
    pub m_sign_changed: bool,
    pub random: RandomChecks,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveySettings {
    /// `"default"` or the path of the grid file.
    pub grid: String,
    pub phase: f64,
    pub ic_convention: IcConvention,
    pub integrator: IntegratorConfig,
}

/// `summary.json` from `survey`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyReport {
    pub settings: SurveySettings,
    pub summary: SurveySummary,
    /// Largest Jacobi drift over orbits still bound at the end.
    pub max_jacobi_drift_bound: Option<f64>,
    pub max_torque_residual_bound: Option<f64>,
}

/// `equilibrium` output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumReport {
    #[serde(flatten)]
    pub orbit: EquilibriumOrbit,
    pub all_prerequisites: bool,
}

impl ErrorReport {
    pub fn from_core(e: &Error, exit_code: i32) -> Self {
        Self { error: e.kind().to_string(), message: e.to_string(), exit_code }
    }
}
