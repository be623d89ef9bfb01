//! JSON description of states, as read by the command-line tool.
//!
//! ```json
//! {"type": "gaussian", "x_mean": 0.0, "y_mean": 0.0, "delta_x": 0.5}
//! {"type": "thermal", "n_mean": 1.0}
//! {"type": "fock_vector", "coefficients": [[0.0, 0.0], [1.0, 0.0]]}
//! {"type": "fock_matrix", "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
//! {"type": "product", "factors": [{"type": "thermal", "n_mean": 1.0}, ...]}
//! ```
//!
//! Gaussian states default to `ΔY = 1/(4ΔX)`; with `xy_correlation` set and
//! `delta_y` omitted, `ΔY` follows from purity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FockDensityMatrix, FockVector, GaussianPureState, ProductState, StateModel, ThermalState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        #[serde(default)]
        x_mean: f64,
        #[serde(default)]
        y_mean: f64,
        delta_x: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_y: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xy_correlation: Option<f64>,
    },
    Thermal {
        n_mean: f64,
    },
    FockVector {
        coefficients: Vec<[f64; 2]>,
    },
    FockMatrix {
        entries: Vec<Vec<[f64; 2]>>,
    },
    Product {
        factors: Vec<StateSpec>,
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state specs always serialize")
    }

    pub fn build(&self) -> Result<StateModel> {
        Ok(match self {
            StateSpec::Gaussian {
                x_mean,
                y_mean,
                delta_x,
                delta_y,
                xy_correlation,
            } => {
                let cov = xy_correlation.unwrap_or(0.0);
                let dy = match delta_y {
                    Some(d) => *d,
                    None => ((1.0 / 16.0 + cov * cov) / (delta_x * delta_x)).sqrt(),
                };
                GaussianPureState::new(*x_mean, *y_mean, *delta_x, dy, cov)?.into()
            }
            StateSpec::Thermal { n_mean } => ThermalState::new(*n_mean)?.into(),
            StateSpec::FockVector { coefficients } => {
                FockVector::new(coefficients.iter().map(|&[re, im]| Complex64::new(re, im)).collect())?.into()
            }
            StateSpec::FockMatrix { entries } => {
                let n = entries.len();
                if entries.iter().any(|row| row.len() != n) {
                    return Err(Error::Contract("fock_matrix entries must form a square matrix".into()));
                }
                let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(entries[i][j][0], entries[i][j][1]));
                FockDensityMatrix::new(m)?.into()
            }
            StateSpec::Product { factors } => {
                ProductState::new(factors.iter().map(|f| f.build()).collect::<Result<_>>()?)?.into()
            }
        })
    }
}

/// Parses and builds a state from its JSON description.
pub fn parse_state(text: &str) -> Result<StateModel> {
    StateSpec::from_json(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_parse() {
        let v = parse_state(r#"{"type":"gaussian","x_mean":0,"y_mean":0,"delta_x":0.5}"#).unwrap();
        assert_eq!(v, StateModel::vacuum());
        let t = parse_state(r#"{"type":"thermal","n_mean":1}"#).unwrap();
        assert_eq!(t, StateModel::thermal(1.0).unwrap());
        let f = parse_state(r#"{"type":"fock_vector","coefficients":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(f, StateModel::number(1));
        let m = parse_state(r#"{"type":"fock_matrix","entries":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#).unwrap();
        assert!(!m.is_pure());
        let p = parse_state(
            r#"{"type":"product","factors":[{"type":"thermal","n_mean":1},{"type":"gaussian","delta_x":1}]}"#,
        )
        .unwrap();
        assert_eq!(p.mode_count(), 2);
    }

    #[test]
    fn correlated_gaussian_purity_fills_delta_y() {
        let g = parse_state(r#"{"type":"gaussian","delta_x":1,"xy_correlation":0.3}"#).unwrap();
        let StateModel::GaussianPure(g) = g else { panic!() };
        assert!((g.delta_y() - (1.0f64 / 16.0 + 0.09).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_state("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"type":"thermal","n_mean":1,"extra":2}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_state(r#"{"type":"laser"}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"type":"thermal","n_mean":-1}"#),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn round_trip() {
        let s = StateSpec::Gaussian {
            x_mean: 1.0,
            y_mean: 0.0,
            delta_x: 0.5,
            delta_y: None,
            xy_correlation: None,
        };
        assert_eq!(StateSpec::from_json(&s.to_json()).unwrap(), s);
    }
}
