//! Command implementations behind the `quadcoh` binary.

pub mod commands;
pub mod config;
pub mod output;

use std::path::Path;

use thiserror::Error;

pub use config::{OutputFormat, RunConfig};
pub use output::OutputRow;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input files, flags or parameter lists.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] quadcoh::Error),
    #[error("self-test failed for criteria {0:?}")]
    SelftestFailed(Vec<u32>),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 self-test failure, 2 bad input, 3 numerical failure, 4 unsupported.
    pub fn exit_code(&self) -> u8 {
        use quadcoh::Error as E;
        match self {
            CliError::SelftestFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Library(e) => match e {
                E::Parse(_) | E::Argument(_) | E::Contract(_) => 2,
                E::Convergence { .. } | E::Capacity(_) | E::Coverage { .. } | E::NonFinite { .. } | E::Positivity(_) => 3,
                E::Unsupported(_) => 4,
            },
            CliError::Internal(_) => 3,
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::SelftestFailed(vec![14]).exit_code(), 1);
        let conv = quadcoh::Error::Convergence {
            value: 1.0,
            estimate: 1.0,
            tolerance: 1e-6,
        };
        assert_eq!(CliError::from(conv).exit_code(), 3);
        assert_eq!(CliError::from(quadcoh::Error::Unsupported("x".into())).exit_code(), 4);
        assert_eq!(CliError::from(quadcoh::Error::Parse("x".into())).exit_code(), 2);
    }
}
