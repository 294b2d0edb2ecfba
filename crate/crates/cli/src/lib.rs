//! Library side of the `roughiso` binary: input parsing, report
//! serialization, and the error-to-exit-code classification. Kept as a
//! library target so integration tests can exercise the pieces directly.

pub mod input;
pub mod output;

use roughiso_core::coarse::CoarseError;
use roughiso_core::families::FamilyError;
use roughiso_core::group::GroupError;
use roughiso_core::isometry::IsomError;
use roughiso_core::metric::MetricError;
use roughiso_core::quotient::QuotientError;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CAP: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// CLI-level failures, already classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, config, or input shapes: exit 3.
    Usage(String),
    /// A resource cap stopped the computation: exit 2.
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Cap(_) => EXIT_CAP,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> CliError {
        match e {
            MetricError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<CoarseError> for CliError {
    fn from(e: CoarseError) -> CliError {
        match e {
            CoarseError::Metric(m) => m.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> CliError {
        match e {
            FamilyError::Metric(m) => m.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<IsomError> for CliError {
    fn from(e: IsomError) -> CliError {
        match e {
            IsomError::Metric(m) => m.into(),
            IsomError::Coarse(c) => c.into(),
            IsomError::Family(f) => f.into(),
            IsomError::TooLarge { .. } => CliError::Cap(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> CliError {
        match e {
            QuotientError::Metric(m) => m.into(),
            QuotientError::Coarse(c) => c.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
