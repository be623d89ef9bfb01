//! Coherence of optical field states relative to the quadrature basis.
//!
//! The library evaluates two coherence quantifiers for single- and multi-mode
//! states of light, using the position-like quadrature `X` (with `a = X + iY`,
//! so the vacuum has `ΔX = 1/2`) as the reference basis:
//!
//! - the ℓ1-style functional `C = ∫∫ |⟨x|ρ|x'⟩| dx dx'`, which reduces to
//!   `(∫|ψ|)²` for pure states;
//! - the relative entropy to the quadrature-diagonal part, with the divergent
//!   `ln σ` of the continuum discretization removed.
//!
//! Closed forms exist for Gaussian pure states and thermal states; everything
//! else goes through numerical quadrature on the position representation.
//! The [`transforms`] module implements rotations, displacements, squeezing,
//! beam splitting and two-mode squeezing as exact maps on [`StateModel`].

pub mod acceptance;
mod error;
pub mod measures;
pub mod numerics;
pub mod states;
pub mod transforms;

pub use error::{Error, Result};
pub use measures::{CoherenceMethod, CoherenceReport, NumericOptions};
pub use states::StateModel;
