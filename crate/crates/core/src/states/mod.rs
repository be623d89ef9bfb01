//! State families and their quadrature representations.
//!
//! [`StateModel`] is the common currency: every measure and transform takes
//! and returns one. Transform wrappers (`Rescaled`, `Displaced`, `Rotated`)
//! keep the wrapped state intact and apply the coordinate maps lazily when
//! the wavefunction or kernel is evaluated.

mod fock;
mod gaussian;
mod kernel;
mod moments;
mod smeared;
pub mod spec;
mod two_mode;

pub use fock::{
    coherent_amplitudes, fock_truncate_coherent, fock_truncate_thermal, FockDensityMatrix,
    FockVector, ThermalState, DEFAULT_FOCK_DIM, TRUNCATION_LOSS_TOL,
};
pub use gaussian::{squeezed_vacuum_for_energy, GaussianPureState};
pub use kernel::{kernel, quadrature_pdf, wavefunction, KernelPlan};
pub use moments::{mean_photon_number, Moments};
pub use smeared::SmearedIncoherentState;
pub use spec::{parse_state, StateSpec};
pub use two_mode::{RemapMatrix, TwoModeBase, TwoModePure};

pub(crate) use fock::project_to_fock;

use crate::error::{Error, Result};

/// Product of single-mode (or multi-mode) factors, one per mode group.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    pub(crate) factors: Vec<StateModel>,
}

impl ProductState {
    pub fn new(factors: Vec<StateModel>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Contract("a product state needs at least one factor".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[StateModel] {
        &self.factors
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateModel {
    GaussianPure(GaussianPureState),
    Thermal(ThermalState),
    FockVector(FockVector),
    FockDensityMatrix(FockDensityMatrix),
    Product(ProductState),
    /// `X → λX`, `Y → Y/λ`.
    Rescaled { inner: Box<StateModel>, lambda: f64 },
    /// `X → X + x0`, `Y → Y + y0`.
    Displaced { inner: Box<StateModel>, x0: f64, y0: f64 },
    /// Free evolution by `tau`, kept symbolically when no exact map to a
    /// concrete family exists. Such states carry moments and entropies but
    /// cannot be evaluated in the position representation.
    Rotated { inner: Box<StateModel>, tau: f64 },
    TwoModeRemapped(TwoModePure),
    SmearedIncoherent(SmearedIncoherentState),
}

impl From<GaussianPureState> for StateModel {
    fn from(s: GaussianPureState) -> Self {
        StateModel::GaussianPure(s)
    }
}

impl From<ThermalState> for StateModel {
    fn from(s: ThermalState) -> Self {
        StateModel::Thermal(s)
    }
}

impl From<FockVector> for StateModel {
    fn from(s: FockVector) -> Self {
        StateModel::FockVector(s)
    }
}

impl From<FockDensityMatrix> for StateModel {
    fn from(s: FockDensityMatrix) -> Self {
        StateModel::FockDensityMatrix(s)
    }
}

impl From<ProductState> for StateModel {
    fn from(s: ProductState) -> Self {
        StateModel::Product(s)
    }
}

impl From<TwoModePure> for StateModel {
    fn from(s: TwoModePure) -> Self {
        StateModel::TwoModeRemapped(s)
    }
}

impl From<SmearedIncoherentState> for StateModel {
    fn from(s: SmearedIncoherentState) -> Self {
        StateModel::SmearedIncoherent(s)
    }
}

impl StateModel {
    pub fn vacuum() -> Self {
        GaussianPureState::vacuum().into()
    }

    pub fn number(n: usize) -> Self {
        FockVector::number(n).into()
    }

    pub fn thermal(n_mean: f64) -> Result<Self> {
        Ok(ThermalState::new(n_mean)?.into())
    }

    pub fn product(factors: Vec<StateModel>) -> Result<Self> {
        Ok(ProductState::new(factors)?.into())
    }

    pub fn family(&self) -> &'static str {
        match self {
            StateModel::GaussianPure(_) => "gaussian",
            StateModel::Thermal(_) => "thermal",
            StateModel::FockVector(_) => "fock_vector",
            StateModel::FockDensityMatrix(_) => "fock_matrix",
            StateModel::Product(_) => "product",
            StateModel::Rescaled { .. } => "rescaled",
            StateModel::Displaced { .. } => "displaced",
            StateModel::Rotated { .. } => "rotated",
            StateModel::TwoModeRemapped(_) => "two_mode",
            StateModel::SmearedIncoherent(_) => "smeared",
        }
    }

    /// Checks wrapper parameters and recursively validates wrapped states.
    /// Leaf families validate on construction.
    pub fn validate(&self) -> Result<()> {
        match self {
            StateModel::Rescaled { inner, lambda } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::Contract(format!("squeeze factor must be positive, got {lambda}")));
                }
                inner.validate()
            }
            StateModel::Displaced { inner, x0, y0 } => {
                if !x0.is_finite() || !y0.is_finite() {
                    return Err(Error::Contract("displacement must be finite".into()));
                }
                inner.validate()
            }
            StateModel::Rotated { inner, tau } => {
                if !tau.is_finite() {
                    return Err(Error::Contract("rotation angle must be finite".into()));
                }
                inner.validate()
            }
            StateModel::Product(p) => p.factors.iter().try_for_each(|f| f.validate()),
            _ => Ok(()),
        }
    }

    pub fn is_pure(&self) -> bool {
        match self {
            StateModel::GaussianPure(_) | StateModel::FockVector(_) => true,
            StateModel::TwoModeRemapped(_) => true,
            StateModel::Thermal(_) | StateModel::FockDensityMatrix(_) => false,
            StateModel::SmearedIncoherent(_) => false,
            StateModel::Product(p) => p.factors.iter().all(|f| f.is_pure()),
            StateModel::Rescaled { inner, .. }
            | StateModel::Displaced { inner, .. }
            | StateModel::Rotated { inner, .. } => inner.is_pure(),
        }
    }

    pub fn mode_count(&self) -> usize {
        match self {
            StateModel::Product(p) => p.factors.iter().map(|f| f.mode_count()).sum(),
            StateModel::TwoModeRemapped(_) => 2,
            StateModel::Rescaled { inner, .. }
            | StateModel::Displaced { inner, .. }
            | StateModel::Rotated { inner, .. } => inner.mode_count(),
            _ => 1,
        }
    }

    /// Interval outside of which the single-mode wavefunction or kernel is
    /// negligible (below roughly 1e−15 relative).
    pub fn support(&self) -> Result<(f64, f64)> {
        match self {
            StateModel::GaussianPure(g) => {
                let h = 12.0 * g.delta_x;
                Ok((g.x_mean - h, g.x_mean + h))
            }
            StateModel::Thermal(t) => {
                let h = 6.0 * (1.0 + 2.0 * t.n_mean).sqrt();
                Ok((-h, h))
            }
            StateModel::FockVector(v) => Ok(fock_support(v.max_occupied())),
            StateModel::FockDensityMatrix(m) => Ok(fock_support(m.max_occupied())),
            StateModel::Rescaled { inner, lambda } => {
                let (a, b) = inner.support()?;
                Ok((a * lambda, b * lambda))
            }
            StateModel::Displaced { inner, x0, .. } => {
                let (a, b) = inner.support()?;
                Ok((a + x0, b + x0))
            }
            StateModel::Rotated { inner, .. } => {
                let (a, b) = inner.support()?;
                let h = a.abs().max(b.abs());
                Ok((-h, h))
            }
            StateModel::SmearedIncoherent(s) => Ok(s.support()),
            StateModel::Product(_) | StateModel::TwoModeRemapped(_) => Err(Error::Unsupported(
                format!("{} state has no single-mode support", self.family()),
            )),
        }
    }

    /// Per-mode supports, in mode order.
    pub fn supports(&self) -> Result<Vec<(f64, f64)>> {
        match self {
            StateModel::Product(p) => {
                let mut out = Vec::new();
                for f in &p.factors {
                    out.extend(f.supports()?);
                }
                Ok(out)
            }
            StateModel::TwoModeRemapped(t) => Ok(t.support().to_vec()),
            _ => Ok(vec![self.support()?]),
        }
    }

    /// Strips unitary single-mode wrappers, returning the innermost state.
    pub(crate) fn unwrap_unitaries(&self) -> &StateModel {
        match self {
            StateModel::Rescaled { inner, .. }
            | StateModel::Displaced { inner, .. }
            | StateModel::Rotated { inner, .. } => inner.unwrap_unitaries(),
            other => other,
        }
    }
}

/// `√(N + ½) + 6` around the origin.
fn fock_support(n_max: usize) -> (f64, f64) {
    let h = (n_max as f64 + 0.5).sqrt() + 6.0;
    (-h, h)
}

/// `2√(2π)`.
pub(crate) const TWO_SQRT_TWO_PI: f64 = 5.013_256_549_262_001;

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn purity_and_modes() {
        let v = StateModel::vacuum();
        assert!(v.is_pure());
        assert_eq!(v.mode_count(), 1);
        let t = StateModel::thermal(1.0).unwrap();
        assert!(!t.is_pure());
        let p = StateModel::product(vec![v.clone(), t.clone(), StateModel::number(2)]).unwrap();
        assert!(!p.is_pure());
        assert_eq!(p.mode_count(), 3);
        assert_eq!(p.supports().unwrap().len(), 3);
        assert!(p.support().is_err());
        assert!(StateModel::product(vec![]).is_err());
    }

    #[test]
    fn wrapper_validation() {
        let s = StateModel::Rescaled {
            inner: Box::new(StateModel::vacuum()),
            lambda: -1.0,
        };
        assert!(s.validate().is_err());
        let s = StateModel::Displaced {
            inner: Box::new(StateModel::vacuum()),
            x0: f64::NAN,
            y0: 0.0,
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn supports_follow_wrappers() {
        let s = StateModel::Displaced {
            inner: Box::new(StateModel::Rescaled {
                inner: Box::new(StateModel::number(1)),
                lambda: 2.0,
            }),
            x0: 1.0,
            y0: 0.0,
        };
        let (a, b) = s.support().unwrap();
        let h = 2.0 * (1.5f64.sqrt() + 6.0);
        assert!((a - (1.0 - h)).abs() < 1e-12 && (b - (1.0 + h)).abs() < 1e-12);
    }

    #[test]
    fn constant() {
        assert!((TWO_SQRT_TWO_PI - 2.0 * (2.0 * PI).sqrt()).abs() < 1e-15);
    }
}
