use regfrac_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("scenario {scenario}: {source}")]
    Core {
        scenario: String,
        #[source]
        source: CoreError,
    },
    #[error("cannot write table: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn core(scenario: &str, source: CoreError) -> Self {
        CliError::Core { scenario: scenario.to_string(), source }
    }

    /// 0 success, 1 I/O, 2 validation, 3 numerical nonconvergence, 4 invariant breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Parse(_) => 2,
            CliError::Io(..) | CliError::Csv(_) | CliError::Json(_) => 1,
            CliError::Core { source, .. } => match source {
                CoreError::InvariantBreach(_) => 4,
                CoreError::NonConvergence { .. }
                | CoreError::Divergence(_)
                | CoreError::Singular(_)
                | CoreError::Fit(_)
                | CoreError::Oracle(_) => 3,
                _ => 2,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_classes() {
        let breach = CliError::core("s", CoreError::InvariantBreach("x".into()));
        assert_eq!(breach.exit_code(), 4);
        let stuck = CliError::core("s", CoreError::NonConvergence { iterations: 1, residual: 1.0 });
        assert_eq!(stuck.exit_code(), 3);
        assert_eq!(CliError::core("s", CoreError::Precondition("x".into())).exit_code(), 2);
        assert_eq!(CliError::Validation("x".into()).exit_code(), 2);
    }
}
