use core::fmt;

use crate::system::Frame;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures raised by the analysis routines.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// A state was passed in the wrong reference frame.
    FrameMismatch { expected: Frame, found: Frame },
    /// Evaluation point coincides with a star or the axis.
    Singularity(&'static str),
    /// `w = 1/2` with equal masses: every radius balances the axial pull.
    DegenerateEquilibrium,
    /// No circular orbit around the axis exists at this `(w, b)`.
    NoEquilibrium { w: f64, b: f64 },
    /// Equal oscillator eigenfrequencies make the amplitude formula singular.
    DegenerateOscillator,
    /// The boundary predicate keeps the same value over the whole scan.
    /// `holds` records that value.
    NoCrossing { b: f64, holds: bool },
    /// A trajectory with no samples was handed to the classifier.
    EmptyTrajectory,
    /// The adaptive integrator could not continue.
    StepFailure { t: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::FrameMismatch { expected, found } => {
                write!(f, "frame mismatch: expected {expected:?}, found {found:?}")
            }
            Error::Singularity(what) => write!(f, "singular evaluation: {what}"),
            Error::DegenerateEquilibrium => f.write_str("degenerate equilibrium: w = 0.5 with equal masses"),
            Error::NoEquilibrium { w, b } => {
                write!(f, "no circular orbit around the axis at w = {w}, b = {b}")
            }
            Error::DegenerateOscillator => f.write_str("oscillator eigenfrequencies coincide"),
            Error::NoCrossing { b, holds } => {
                write!(f, "boundary predicate never changes at b = {b} (constantly {holds})")
            }
            Error::EmptyTrajectory => f.write_str("trajectory has no samples"),
            Error::StepFailure { t } => write!(f, "integration step failure at t = {t}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "Domain",
            Error::FrameMismatch { .. } => "FrameMismatch",
            Error::Singularity(_) => "Singularity",
            Error::DegenerateEquilibrium => "DegenerateEquilibrium",
            Error::NoEquilibrium { .. } => "NoEquilibrium",
            Error::DegenerateOscillator => "DegenerateOscillator",
            Error::NoCrossing { .. } => "NoCrossing",
            Error::EmptyTrajectory => "EmptyTrajectory",
            Error::StepFailure { .. } => "StepFailure",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::StepFailure { .. } | Error::DegenerateOscillator)
    }
}
