use std::path::Path;

use quadcoh::measures::Comparator;
use quadcoh::NumericOptions;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Settings shared by every command. Read from a JSON file; command-line
/// flags override individual fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerance: f64,
    pub grid_points: usize,
    pub fock_dim: usize,
    pub output_format: OutputFormat,
    pub comparator: Comparator,
}

impl Default for RunConfig {
    fn default() -> Self {
        let o = NumericOptions::default();
        Self {
            tolerance: o.tolerance,
            grid_points: o.grid_points,
            fock_dim: o.fock_dim,
            output_format: OutputFormat::Csv,
            comparator: Comparator::SqueezedVacuum,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&crate::read_file(path)?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Input(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.grid_points < 128 {
            return Err(CliError::Input(format!("grid_points must be at least 128, got {}", self.grid_points)));
        }
        if self.fock_dim == 0 {
            return Err(CliError::Input("fock_dim must be positive".into()));
        }
        Ok(())
    }

    pub fn numeric_options(&self) -> NumericOptions {
        NumericOptions {
            tolerance: self.tolerance,
            grid_points: self.grid_points,
            fock_dim: self.fock_dim,
            ..NumericOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::from_json("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.numeric_options(), NumericOptions::default());
        let c = RunConfig::from_json(r#"{"tolerance": 1e-4, "output_format": "json", "comparator": "coherent"}"#).unwrap();
        assert_eq!(c.output_format, OutputFormat::Json);
        assert_eq!(c.comparator, Comparator::Coherent);
        assert_eq!(c.numeric_options().tolerance, 1e-4);
    }

    #[test]
    fn invalid_configs() {
        assert!(RunConfig::from_json(r#"{"tolerance": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"grid_points": 64}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tolerence": 1e-6}"#).is_err());
        assert!(RunConfig::from_json("not json").is_err());
    }
}
