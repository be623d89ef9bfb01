//! The two coherence quantifiers and the incoherent approximants.

mod chi;
mod coherence;
mod entropy;
mod fig1;
mod xi;

use serde::{Deserialize, Serialize};

pub use chi::{
    chi_default_range, chi_diagonal, chi_entropy_term, chi_fock_reconstruction, hilbert_schmidt_distance,
    ChiBoxState, ChiDiagonal, ChiWeights, QuadratureSource,
};
pub use coherence::{
    coherence_l1, coherence_l1_numeric, coherence_l1_on_grids, coherence_two_mode_on_grids,
    coherence_two_mode_pure, NumericPath,
};
pub use entropy::{relative_entropy_coherence, EntropyMethod, EntropyReport};
pub use fig1::{fig1_row, Comparator, Fig1Row};
pub use xi::{xi_from_state, xi_incoherent_state, IncoherentApprox};

/// Tolerances and resolutions for the numerical paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericOptions {
    /// Relative error target for numerical coherence values.
    pub tolerance: f64,
    /// Trapezoid intervals per axis before refinement.
    pub grid_points: usize,
    /// Grid doublings allowed for one-dimensional integrals.
    pub max_refinements_1d: usize,
    /// Grid doublings allowed for two-dimensional integrals.
    pub max_refinements_2d: usize,
    /// Fock truncation used where a number-basis representation is needed.
    pub fock_dim: usize,
    /// Largest probability mass a χ bin range may leave uncovered.
    pub coverage_tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            grid_points: 4096,
            max_refinements_1d: 6,
            max_refinements_2d: 2,
            fock_dim: crate::states::DEFAULT_FOCK_DIM,
            coverage_tol: 1e-6,
        }
    }
}

impl NumericOptions {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_fock_dim(mut self, fock_dim: usize) -> Self {
        self.fock_dim = fock_dim;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceMethod {
    Analytic,
    NumericPure,
    NumericKernel,
    Product,
}

impl CoherenceMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoherenceMethod::Analytic => "analytic",
            CoherenceMethod::NumericPure => "numeric_pure",
            CoherenceMethod::NumericKernel => "numeric_kernel",
            CoherenceMethod::Product => "product",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub value: f64,
    pub error_estimate: f64,
    pub method: CoherenceMethod,
}

impl CoherenceReport {
    pub fn analytic(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            method: CoherenceMethod::Analytic,
        }
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor,
            method: self.method,
        }
    }
}
