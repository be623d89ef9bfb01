//! Special functions, quadrature grids, integration and entropies.

mod entropy;
mod grid;
mod hermite;
mod integrate;

pub use entropy::{
    differential_entropy, hermitian_spectrum, spectrum_entropy, von_neumann_entropy,
    EIGENVALUE_CLAMP, HERMITIAN_TOL,
};
pub use grid::{build_grid, gauss_legendre, QuadratureGrid, Scheme};
pub use hermite::{hermite_function, hermite_psi, HermiteEvaluator, DEFAULT_MAX_ORDER};
pub use integrate::{integrate_1d, integrate_2d, integrate_2d_rows, pairwise_sum, IntegralResult};

pub(crate) use hermite::psi_all_into;

/// Default Gauss–Legendre layout for smooth integrands.
pub const DEFAULT_GL_PANELS: usize = 16;
pub const DEFAULT_GL_POINTS: usize = 64;

/// Composite Gauss–Legendre grid with the default layout.
pub fn default_smooth_grid(domain: (f64, f64)) -> crate::Result<QuadratureGrid> {
    build_grid(domain, DEFAULT_GL_POINTS, DEFAULT_GL_PANELS, Scheme::CompositeGaussLegendre)
}
