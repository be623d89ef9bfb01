//! Smeared incoherent states built from a quadrature distribution `P`.

use super::chi::ChiDiagonal;
use super::NumericOptions;
use crate::error::{Error, Result};
use crate::numerics::{build_grid, QuadratureGrid, Scheme};
use crate::states::{quadrature_pdf, SmearedIncoherentState, StateModel};

const MASS_TOL: f64 = 1e-6;

/// Either discretization of the incoherent part of a state.
#[derive(Debug, Clone, PartialEq)]
pub enum IncoherentApprox {
    Chi(ChiDiagonal),
    Xi(SmearedIncoherentState),
}

impl IncoherentApprox {
    pub fn sigma(&self) -> f64 {
        match self {
            IncoherentApprox::Chi(c) => c.sigma,
            IncoherentApprox::Xi(x) => x.sigma(),
        }
    }
}

/// `∫ P(x̄) |ξ_{x̄,σ}⟩⟨ξ_{x̄,σ}| dx̄` with `P` sampled on `grid`; each node
/// carries mass `w_i P(x_i)`.
pub fn xi_incoherent_state<F>(p: F, grid: &QuadratureGrid, sigma: f64) -> Result<SmearedIncoherentState>
where
    F: Fn(f64) -> f64,
{
    let mut masses = Vec::with_capacity(grid.len());
    for (&x, &w) in grid.nodes().iter().zip(grid.weights()) {
        let v = p(x);
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Contract(format!("P({x}) = {v} is not a probability density value")));
        }
        masses.push(w * v);
    }
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::Contract(format!("P integrates to {total}, not 1")));
    }
    SmearedIncoherentState::new(grid.nodes().to_vec(), masses, sigma)
}

/// ξ smearing of a state's own quadrature distribution.
pub fn xi_from_state(state: &StateModel, sigma: f64, opts: &NumericOptions) -> Result<SmearedIncoherentState> {
    let grid = build_grid(state.support()?, opts.grid_points.max(2), 1, Scheme::Trapezoid)?;
    quadrature_pdf(state, grid.nodes()[0])?;
    xi_incoherent_state(|x| quadrature_pdf(state, x).unwrap_or(f64::NAN), &grid, sigma)
}
