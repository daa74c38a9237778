use std::fmt;
use std::path::Path;

use morphmap::calibration::CalibrationError;
use morphmap::interp::InterpError;
use morphmap::metric::MetricError;
use morphmap::report::ReportError;
use morphmap::score_model::ScoreError;
use morphmap::simulator::SimError;

/// Error carrying the process exit code: 1 for unreadable or malformed
/// input, 2 for well-formed input that cannot be evaluated.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }

    pub fn semantic(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }

    pub fn context(self, what: impl fmt::Display) -> Self {
        Self {
            code: self.code,
            error: self.error.context(what.to_string()),
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub trait Located<T> {
    /// Prefixes the error with `path`.
    fn at(self, path: &Path) -> Outcome<T>;
}

impl<T, E: Into<Failure>> Located<T> for Result<T, E> {
    fn at(self, path: &Path) -> Outcome<T> {
        self.map_err(|e| e.into().context(path.display()))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

impl From<ScoreError> for Failure {
    fn from(e: ScoreError) -> Self {
        Failure::input(e)
    }
}

impl From<CalibrationError> for Failure {
    fn from(e: CalibrationError) -> Self {
        match e {
            CalibrationError::TargetFar(_) => Failure::input(e),
            _ => Failure::semantic(e),
        }
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        Failure::semantic(e)
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::ShapeMismatch { .. } | ReportError::TooFew { .. } => Failure::semantic(e),
            _ => Failure::input(e),
        }
    }
}

impl From<InterpError> for Failure {
    fn from(e: InterpError) -> Self {
        match e {
            InterpError::Antipodal { .. } | InterpError::ZeroVector => Failure::semantic(e),
            _ => Failure::input(e),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(_) => Failure::input(e),
            SimError::Interp(i) => i.into(),
            SimError::Score(s) => s.into(),
            SimError::Calibration(c) => c.into(),
            SimError::Metric(m) => m.into(),
            SimError::ZeroProjection => Failure::semantic(e),
        }
    }
}
