use std::path::PathBuf;

use thiserror::Error;

/// Everything that can stop a command. Each variant maps to one process exit
/// code, see [`CliError::exit_code`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] sspe_core::Error),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("scenario {name} failed: {detail}")]
    ScenarioFailed { name: String, detail: String },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 2 for bad configuration or input, 3 for numeric failures, 4 when an
    /// optimizer or fit did not converge, 1 for failed scenario assertions and
    /// output errors.
    pub fn exit_code(&self) -> i32 {
        use sspe_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Input { .. } => 2,
            CliError::Core(
                E::InvalidParams(_)
                | E::InvalidSchedule(_)
                | E::InvalidArgument(_)
                | E::ZeroCoupling
                | E::DegenerateDetuning(_)
                | E::StepTooLarge { .. },
            ) => 2,
            CliError::Core(_) => 3,
            CliError::NotConverged(_) => 4,
            CliError::ScenarioFailed { .. } | CliError::Output { .. } => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sspe_core::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(E::StepTooLarge { dt: 1.0, limit: 0.5 }).exit_code(), 2);
        assert_eq!(CliError::from(E::NonFinite(3.0)).exit_code(), 3);
        assert_eq!(CliError::from(E::AmplitudeCapExceeded { amplitude: 1.0, cap: 0.5 }).exit_code(), 3);
        assert_eq!(CliError::NotConverged("fit".into()).exit_code(), 4);
        assert_eq!(CliError::ScenarioFailed { name: "a".into(), detail: "b".into() }.exit_code(), 1);
    }
}
